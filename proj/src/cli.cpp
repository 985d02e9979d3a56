#include "signrange/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "signrange/dyadic_set.hpp"
#include "signrange/error.hpp"
#include "signrange/io.hpp"
#include "signrange/level_density.hpp"
#include "signrange/moran.hpp"
#include "signrange/oracle.hpp"
#include "signrange/ratio.hpp"
#include "signrange/selection.hpp"

namespace signrange::cli {

namespace {

unsigned default_threads() {
    if (const char* env = std::getenv(kThreadsEnv)) {
        try {
            const long v = std::stol(env);
            if (v >= 1 && v <= 1024) {
                return static_cast<unsigned>(v);
            }
        } catch (...) {
        }
    }
    return 1;
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

// Everything a subcommand may need; lives for one run().
struct Opts {
    unsigned threads = 1;
    std::uint64_t seed = kDefaultSeed;

    std::string in, out, csv, raster_csv, system_file;
    std::optional<std::size_t> count;

    // seq gen
    std::string family = "linear-ratio", t = "0", parts, scales, m_list, n_list;
    double scale = 1.0, power = 1.0;

    // signs / ratio
    std::string mode;
    std::string target = "0";
    double eps = 1e-2;
    int depth = 12;
    double threshold = 1.0;
    std::size_t directions = 16;

    // moran
    double delta = 0.5;
    std::size_t levels = 12;
    double ratioA = 2.0, ratioB = 3.0;
    std::size_t render_depth = 10;
    std::size_t width = 256, height = 256;
    std::string rect;

    // oracle
    std::string matrix = "1,0,0,1";
    double epsilon = 0.1;

    // level density
    std::string kind = "progression", members;
    std::uint64_t q = 2, j = 0, horizon = 1000000;
    double holder_eps = 0.2;
    std::size_t samples = 10000, length = 1000;
    std::string predicate = "all";
    double ball_delta = 0.5;
};

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    Opts o;
    Json config = Json::object();

    void emit(const std::string& path, const std::string& text, const std::string& what) {
        if (path.empty()) {
            out_ << text;
        } else {
            write_text_file(path, text);
            out_ << "wrote " << what << " to " << path << "\n";
        }
    }

    void emit_json(Json body) {
        Json doc;
        doc["_meta"] = meta_record(config);
        for (auto it = body.begin(); it != body.end(); ++it) {
            doc[it.key()] = it.value();
        }
        emit(o.out, doc.dump(2) + "\n", "json");
    }

    void note(const std::string& line) { out_ << line << "\n"; }

    SequenceWindow load_window() {
        require(!o.in.empty(), ErrorKind::InvalidArgument, "--in is required");
        const auto spec = sequence_from_json(read_json_file(o.in));
        std::size_t N = 0;
        if (o.count) {
            N = *o.count;
        } else if (auto cap = max_length(spec)) {
            N = *cap;
        } else {
            fail(ErrorKind::InvalidArgument, "unbounded family: pass --count");
        }
        config["input"] = sequence_to_json(spec);
        config["count"] = N;
        return make_window(spec, N);
    }

    std::ostream& out_;
    std::ostream& err_;
};

Rect parse_rect(const std::string& text) {
    const auto v = parse_real_list(text);
    require(v.size() == 4, ErrorKind::InvalidArgument, "rectangles are x0,x1,y0,y1");
    const Rect r{v[0], v[1], v[2], v[3]};
    require(r.valid(), ErrorKind::InvalidArgument, "rectangle has inverted bounds");
    return r;
}

RatioValue parse_ratio(const std::string& s) {
    if (s == "inf" || s == "infinity") {
        return RatioValue::infinity();
    }
    return RatioValue::finite(parse_real_list(s).at(0));
}

Json ratio_json(RatioValue t) { return t.infinite ? Json("inf") : Json(t.value); }

Json report_json(const RatioReport& r) {
    return Json{{"ratio", ratio_json(r.ratio)},
                {"branch", r.branch == RatioBranch::BDominant ? "b-dominant" : "a-dominant"},
                {"interval", Json::array({r.lo, r.hi})},
                {"mass", r.mass},
                {"maskSize", r.mask.size()},
                {"depth", r.depth},
                {"horizon", r.horizon},
                {"levelMass", r.level_mass},
                {"diagnostic", "finite horizon " + std::to_string(r.horizon)}};
}

Json selection_json(const SelectionResult& r) {
    Json j = signs_to_json(r.signs);
    j["prefixBound"] = r.prefix_bound;
    j["sum"] = complex_to_json(r.sum);
    j["residual"] = complex_to_json(r.residual);
    return j;
}

IndexSet make_index_set(const Opts& o) {
    if (o.kind == "progression") {
        return IndexSet::progression(o.q, o.j);
    }
    if (o.kind == "squares") {
        return IndexSet::squares(std::max<std::uint64_t>(o.horizon, o.length));
    }
    if (o.kind == "explicit") {
        std::vector<std::uint64_t> m;
        for (int v : parse_int_list(o.members)) {
            require(v >= 1, ErrorKind::InvalidArgument, "members lie in {1, 2, ...}");
            m.push_back(static_cast<std::uint64_t>(v));
        }
        return IndexSet::explicit_set(std::move(m));
    }
    fail(ErrorKind::InvalidArgument, "unknown --kind '" + o.kind + "' (progression|squares|explicit)");
}

Json index_set_config(const Opts& o) {
    Json j{{"kind", o.kind}};
    if (o.kind == "progression") {
        j["q"] = o.q;
        j["j"] = o.j;
    } else if (o.kind == "explicit") {
        j["members"] = o.members;
    }
    return j;
}

SequenceSpec generated_spec(const Opts& o) {
    SequenceSpec spec;
    const auto& f = o.family;
    if (f == "linear-ratio") {
        spec.family = LinearRatioFamily{parse_ratio(o.t), o.scale, o.power};
    } else if (f == "example41" || f == "harmonic-log-alt") {
        spec.family = HarmonicLogAltFamily{};
    } else if (f == "example42" || f == "dyadic-tower") {
        DyadicTowerFamily t;
        t.m = o.m_list.empty() ? std::vector<int>{0, 1, 2} : parse_int_list(o.m_list);
        t.n = o.n_list.empty() ? std::vector<int>{0, 3, 7} : parse_int_list(o.n_list);
        spec.family = t;
    } else if (f == "interleaved") {
        require(!o.parts.empty(), ErrorKind::InvalidArgument, "interleaved needs --parts");
        std::vector<std::string> ts;
        std::stringstream ss(o.parts);
        for (std::string item; std::getline(ss, item, ',');) {
            ts.push_back(item);
        }
        const auto sc = o.scales.empty() ? std::vector<double>(ts.size(), 1.0) : parse_real_list(o.scales);
        require(sc.size() == ts.size(), ErrorKind::InvalidArgument, "--scales must match --parts");
        InterleavedFamily fam;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            fam.parts.push_back({parse_ratio(ts[i]), sc[i], o.power});
        }
        spec.family = fam;
    } else {
        fail(ErrorKind::InvalidArgument, "unknown --family '" + f + "'");
    }
    spec.limit = o.count;
    validate(spec);
    return spec;
}

int cmd_seq_gen(Runner& r) {
    const auto spec = generated_spec(r.o);
    std::size_t N = r.o.count.value_or(max_length(spec).value_or(0));
    require(N > 0, ErrorKind::InvalidArgument, "unbounded family: pass --count");
    if (auto cap = max_length(spec)) {
        N = std::min(N, *cap);
    }
    r.config["family"] = r.o.family;
    Json body = sequence_to_json(spec);
    body["terms"] = points_to_json(make_window(spec, N).terms());
    r.config["count"] = N;
    r.emit_json(body);
    return kOk;
}

int cmd_signs_bound(Runner& r) {
    const auto w = r.load_window();
    const std::string mode = r.o.mode.empty() ? "bounded" : r.o.mode;
    r.config["mode"] = mode;
    const double sup = sup_norm(w.terms());
    Json body;
    bool finding = false;
    if (mode == "bounded") {
        const auto s = bounded_signs(w);
        body = selection_json(s);
        body["merges"] = s.merges;
        body["combines"] = s.combines;
        body["fallbacks"] = s.fallbacks;
        finding = s.prefix_bound > 5.0 * std::max(1.0, sup) * (1.0 + 1e-12);
    } else if (mode == "tail") {
        const auto s = tail_control(w);
        body = selection_json(s);
        Json blocks = Json::array();
        for (const auto& b : s.blocks) {
            blocks.push_back(Json{{"begin", b.begin}, {"end", b.end}, {"bound", b.bound}, {"sup", b.sup},
                                  {"internalPrefix", b.internal_prefix}, {"orientation", b.orientation}});
        }
        body["blocks"] = blocks;
        finding = max_norm(s.sum) > 5.0 * sup * (1.0 + 1e-12);
    } else {
        fail(ErrorKind::InvalidArgument, "unknown --mode '" + mode + "' (bounded|tail)");
    }
    body["supNorm"] = sup;
    body["withinFive"] = !finding;
    r.emit_json(body);
    return finding ? kFinding : kOk;
}

int cmd_signs_target(Runner& r) {
    const auto w = r.load_window();
    const std::string mode = r.o.mode.empty() ? "complex" : r.o.mode;
    const Complex2 c = parse_complex(r.o.target);
    r.config["mode"] = mode;
    r.config["target"] = complex_to_json(c);
    r.config["eps"] = r.o.eps;
    Json body;
    if (mode == "greedy") {
        std::vector<double> re;
        for (const auto& t : w) {
            re.push_back(t.re);
        }
        const auto g = greedy_target_real(re, c.re);
        body = signs_to_json(g.signs);
        body["residual"] = g.residual;
        body["crossing"] = g.crossing ? Json(*g.crossing + 1) : Json(nullptr);
        body["envelopeHolds"] = g.envelope_holds;
        body["worstEnvelopeExcess"] = g.worst_envelope_excess;
    } else if (mode == "complex") {
        r.config["depth"] = r.o.depth;
        r.config["threshold"] = r.o.threshold;
        const auto ratios = detect_ratios(w, r.o.depth, r.o.threshold);
        const auto s = approx_target_complex(w, ratios, c, r.o.eps);
        body = selection_json(s);
        Json rs = Json::array();
        for (const auto& rep : ratios) {
            rs.push_back(report_json(rep));
        }
        body["ratios"] = rs;
    } else {
        fail(ErrorKind::InvalidArgument, "unknown --mode '" + mode + "' (greedy|complex)");
    }
    r.emit_json(body);
    return kOk;
}

int cmd_ratio_report(Runner& r) {
    const auto w = r.load_window();
    r.config["depth"] = r.o.depth;
    r.config["threshold"] = r.o.threshold;
    r.config["directions"] = r.o.directions;
    Json body;
    body["extract"] = report_json(dyadic_ratio_extract(w, r.o.depth));
    Json rs = Json::array();
    for (const auto& rep : detect_ratios(w, r.o.depth, r.o.threshold)) {
        rs.push_back(report_json(rep));
    }
    body["ratios"] = rs;
    const auto prof = nonsummability_profile(w, r.o.directions);
    Json samples = Json::array();
    std::string csv = meta_comment(r.config) + "theta,mass\n";
    for (std::size_t i = 0; i < prof.angles.size(); ++i) {
        samples.push_back(Json::array({prof.angles[i], prof.masses[i]}));
        csv += format_double(prof.angles[i]) + "," + format_double(prof.masses[i]) + "\n";
    }
    body["profile"] = Json{{"minAngle", prof.min_angle}, {"minMass", prof.min_mass}, {"horizon", prof.horizon},
                           {"samples", samples}};
    r.emit_json(body);
    if (!r.o.csv.empty()) {
        r.emit(r.o.csv, csv, "profile csv");
    }
    return kOk;
}

TwoRatioBuild construct(Runner& r) {
    r.config["delta"] = r.o.delta;
    r.config["levels"] = r.o.levels;
    r.config["ratioA"] = r.o.ratioA;
    r.config["ratioB"] = r.o.ratioB;
    const auto pair = synthetic_two_ratio_windows(r.o.ratioA, r.o.ratioB, r.o.delta, r.o.levels);
    auto b = build_two_ratio_system(pair.A, pair.B, r.o.delta, r.o.levels, false);
    r.config["horizon"] = pair.A.size();
    return b;
}

Json system_json(const MoranSystem& s) {
    Json levels = Json::array();
    for (const auto& level : s.all_levels()) {
        levels.push_back(points_to_json(level));
    }
    return Json{{"r", s.contraction()}, {"levels", levels}, {"M", s.offset_bound()}, {"R", s.ball_radius()}};
}

MoranSystem system_from_json(const Json& j) {
    try {
        const Json& s = j.contains("system") ? j.at("system") : j;
        std::vector<std::vector<Complex2>> levels;
        for (const auto& level : s.at("levels")) {
            auto& out = levels.emplace_back();
            for (const auto& d : level) {
                out.push_back(complex_from_json(d));
            }
        }
        return MoranSystem(s.at("r").get<double>(), std::move(levels));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("malformed system record: ") + e.what());
    }
}

Json build_json(const TwoRatioBuild& b) {
    Json brackets = Json::array();
    for (const auto& br : b.brackets) {
        brackets.push_back(Json{{"level", br.level}, {"a1", br.a1}, {"b1", br.b1}, {"alpha1", br.alpha1},
                                {"beta1", br.beta1}, {"pass", br.all()}, {"sumInBox", br.sum_in_box},
                                {"diffInBox", br.diff_in_box}});
    }
    Json covering = Json::array();
    for (std::size_t k = 0; k < b.covering.size(); ++k) {
        const auto& c = b.covering[k];
        covering.push_back(Json{{"level", k + 1},
                                {"covered", c.covered},
                                {"witness", c.witness ? complex_to_json(*c.witness) : Json(nullptr)},
                                {"gap", c.witness_gap}});
    }
    Json D = Json::array();
    for (const auto& level : b.D) {
        D.push_back(points_to_json(level));
    }
    return Json{{"system", system_json(b.system)}, {"D", D}, {"brackets", brackets}, {"covering", covering},
                {"bracketsPass", b.brackets_pass()}, {"coveringPass", b.covering_pass()}};
}

std::string check_summary(const TwoRatioBuild& b) {
    std::string cov;
    if (b.covering_pass()) {
        cov = "true \xC3\x97" + std::to_string(b.covering.size());
    } else {
        cov = "false at levels ";
        bool first = true;
        for (std::size_t k = 0; k < b.covering.size(); ++k) {
            if (!b.covering[k].covered) {
                cov += (first ? "" : ",") + std::to_string(k + 1);
                first = false;
            }
        }
    }
    std::string br = "pass";
    for (const auto& x : b.brackets) {
        if (!x.all()) {
            br = "fail at level " + std::to_string(x.level) + " (" + x.first_failure() + ")";
            break;
        }
    }
    return "covering: " + cov + "; brackets: " + br;
}

int cmd_moran_build(Runner& r) {
    const auto b = construct(r);
    r.emit_json(build_json(b));
    return b.brackets_pass() && b.covering_pass() ? kOk : kFinding;
}

int cmd_moran_check(Runner& r) {
    const auto b = construct(r);
    if (!r.o.out.empty()) {
        r.emit_json(build_json(b));
    }
    r.note(check_summary(b));
    if (!b.covering_pass()) {
        for (std::size_t k = 0; k < b.covering.size(); ++k) {
            if (const auto& c = b.covering[k]; !c.covered) {
                r.note("level " + std::to_string(k + 1) + " uncovered witness " + format_complex(*c.witness) +
                       " gap " + format_double(c.witness_gap));
                break;
            }
        }
    }
    return b.brackets_pass() && b.covering_pass() ? kOk : kFinding;
}

int cmd_moran_render(Runner& r) {
    std::optional<MoranSystem> sys;
    if (!r.o.system_file.empty()) {
        sys = system_from_json(read_json_file(r.o.system_file));
        r.config["system"] = system_json(*sys);
    } else {
        sys = construct(r).system;
    }
    const std::size_t depth = std::min(r.o.render_depth, sys->levels());
    r.config["depth"] = depth;
    const Rect window = r.o.rect.empty() ? Rect::square(5.0) : parse_rect(r.o.rect);
    r.config["rect"] = Json::array({window.x0, window.x1, window.y0, window.y1});
    r.config["width"] = r.o.width;
    r.config["height"] = r.o.height;
    const auto cloud = attractor_points(*sys, depth, r.o.threads);
    const auto raster = rasterize(cloud.points, window, r.o.width, r.o.height);
    r.emit(r.o.out, raster_pgm(r.config, raster), "raster");
    if (!r.o.raster_csv.empty()) {
        r.emit(r.o.raster_csv, raster_csv(r.config, raster), "raster csv");
    }
    if (!r.o.csv.empty()) {
        r.emit(r.o.csv, points_csv(r.config, cloud.points), "attractor csv");
    }
    return kOk;
}

int cmd_oracle_range(Runner& r) {
    const auto w = r.load_window();
    const auto range = exact_range(w, r.o.threads);
    r.emit(r.o.out, points_csv(r.config, range.points), "range csv");
    return kOk;
}

int cmd_oracle_disc(Runner& r) {
    const auto w = r.load_window();
    const auto d = min_prefix_discrepancy(w);
    Json body = signs_to_json(d.witness);
    body["value"] = d.value;
    r.emit_json(body);
    return kOk;
}

int cmd_oracle_equiv(Runner& r) {
    const auto w = r.load_window();
    const auto m = parse_real_list(r.o.matrix);
    require(m.size() == 4, ErrorKind::InvalidArgument, "--matrix takes m11,m12,m21,m22");
    r.config["matrix"] = m;
    const Mat2 M{m[0], m[1], m[2], m[3]};
    r.emit_json(Json{{"equivariant", transform_equivariance_check(w, M, r.o.threads)}});
    return kOk;
}

int cmd_oracle_coverage(Runner& r) {
    const auto w = r.load_window();
    const Rect window = parse_rect(r.o.rect.empty() ? std::string("-1,1,-1,1") : r.o.rect);
    r.config["rect"] = Json::array({window.x0, window.x1, window.y0, window.y1});
    r.config["epsilon"] = r.o.epsilon;
    const auto cov = epsilon_net_coverage(exact_range(w, r.o.threads), window, r.o.epsilon);
    r.emit_json(Json{{"coveredFraction", cov.covered_fraction},
                     {"worstGap", cov.worst_gap},
                     {"cells", cov.cells},
                     {"worstCenter", complex_to_json(cov.worst_center)}});
    return kOk;
}

int cmd_range_raster(Runner& r) {
    const auto w = r.load_window();
    const auto range = exact_range(w, r.o.threads);
    Rect window;
    if (r.o.rect.empty()) {
        window = {range.points.front().re, range.points.front().re, range.points.front().im, range.points.front().im};
        for (const auto& p : range.points) {
            window.x0 = std::min(window.x0, p.re);
            window.x1 = std::max(window.x1, p.re);
            window.y0 = std::min(window.y0, p.im);
            window.y1 = std::max(window.y1, p.im);
        }
    } else {
        window = parse_rect(r.o.rect);
    }
    r.config["rect"] = Json::array({window.x0, window.x1, window.y0, window.y1});
    r.config["width"] = r.o.width;
    r.config["height"] = r.o.height;
    const auto raster = rasterize(range.points, window, r.o.width, r.o.height);
    r.emit(r.o.out, raster_pgm(r.config, raster), "raster");
    if (!r.o.csv.empty()) {
        r.emit(r.o.csv, raster_csv(r.config, raster), "raster csv");
    }
    return kOk;
}

int cmd_density(Runner& r) {
    const auto set = make_index_set(r.o);
    r.config["set"] = index_set_config(r.o);
    r.config["horizon"] = r.o.horizon;
    const auto d = density(set, r.o.horizon);
    r.emit_json(Json{{"upper", d.upper},
                     {"lower", d.lower},
                     {"checkpoints", d.checkpoints},
                     {"ratios", d.ratios},
                     {"horizon", d.horizon}});
    return kOk;
}

int cmd_holder(Runner& r) {
    const auto set = make_index_set(r.o);
    r.config["set"] = index_set_config(r.o);
    r.config["eps"] = r.o.holder_eps;
    r.config["samples"] = r.o.samples;
    r.config["length"] = r.o.length;
    r.config["seed"] = r.o.seed;
    const auto h = holder_check(set, r.o.holder_eps, r.o.samples, r.o.length, r.o.seed);
    r.emit_json(Json{{"pass", h.pass()},
                     {"deterministicPass", h.deterministic_pass},
                     {"holdsFromOne", h.holds_from_one},
                     {"k0", h.k0},
                     {"sampledPass", h.sampled_pass},
                     {"samples", h.samples},
                     {"worstLog2Ratio", h.worst_log2_ratio},
                     {"worstK", h.worst_k},
                     {"worstKh", h.worst_kh}});
    return kOk;
}

int cmd_boxdim(Runner& r) {
    const std::size_t depth = static_cast<std::size_t>(std::max(r.o.depth, 1));
    r.config["predicate"] = r.o.predicate;
    r.config["depth"] = depth;
    PrefixPredicate pred;
    if (r.o.predicate == "all") {
        pred = [](std::span<const std::int8_t>) { return true; };
    } else if (r.o.predicate == "fix-first") {
        pred = [](std::span<const std::int8_t> x) { return x[0] == 1; };
    } else if (r.o.predicate == "even-plus") {
        pred = [](std::span<const std::int8_t> x) { return x.size() % 2 == 1 || x.back() == 1; };
    } else if (r.o.predicate == "ball") {
        const auto w = r.load_window();
        require(w.size() >= depth, ErrorKind::InvalidArgument, "ball predicate needs at least depth terms");
        const Complex2 c = parse_complex(r.o.target);
        r.config["target"] = complex_to_json(c);
        r.config["delta"] = r.o.ball_delta;
        pred = ball_feasible_predicate({w.begin(), w.end()}, c, r.o.ball_delta);
    } else {
        fail(ErrorKind::InvalidArgument, "unknown --predicate '" + r.o.predicate + "' (all|fix-first|even-plus|ball)");
    }
    const auto b = box_dim_estimate(pred, depth, r.o.threads);
    r.emit_json(Json{{"estimate", b.estimate},
                     {"survivors", b.survivors},
                     {"allRejected", b.all_rejected},
                     {"extinct", b.extinct}});
    if (!r.o.csv.empty()) {
        std::string csv = meta_comment(r.config) + "k,L_k\n";
        for (std::size_t k = 0; k < b.survivors.size(); ++k) {
            csv += std::to_string(k + 1) + "," + std::to_string(b.survivors[k]) + "\n";
        }
        r.emit(r.o.csv, csv, "survival csv");
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Runner r(out, err);
    Opts& o = r.o;
    o.threads = default_threads();

    CLI::App app{"signed-series range toolkit", kToolName};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--threads", o.threads, "worker threads (default $SIGNRANGE_THREADS or 1)")
        ->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", o.seed, "seed for randomized checks");
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

    std::function<int(Runner&)> action;
    std::string name;
    auto leaf = [&](CLI::App* parent, const std::string& cmd, const std::string& help, int (*fn)(Runner&)) {
        auto* sub = parent->add_subcommand(cmd, help);
        const std::string full = parent == &app ? cmd : parent->get_name() + " " + cmd;
        sub->callback([&action, &name, fn, full] {
            action = fn;
            name = full;
        });
        return sub;
    };
    auto window_opts = [&](CLI::App* s) {
        s->add_option("--in", o.in, "sequence file")->required();
        s->add_option("--count,--n", o.count, "number of terms");
    };

    auto* seq = app.add_subcommand("seq", "sequence files")->require_subcommand(1);
    {
        auto* s = leaf(seq, "gen", "emit a sequence file", cmd_seq_gen);
        s->add_option("--family", o.family,
                      "linear-ratio | example41 | harmonic-log-alt | example42 | dyadic-tower | interleaved")
            ->required();
        s->add_option("--t", o.t, "ratio t (number or inf)");
        s->add_option("--scale", o.scale);
        s->add_option("--power", o.power);
        s->add_option("--m", o.m_list, "tower m schedule, e.g. 0,1,2");
        s->add_option("--nsched", o.n_list, "tower n schedule, e.g. 0,3,7");
        s->add_option("--parts", o.parts, "interleaved ratios, e.g. 0.5,3");
        s->add_option("--scales", o.scales, "interleaved scales, e.g. 2,1");
        s->add_option("--count", o.count, "number of terms")->required();
        s->add_option("--out", o.out);
    }

    auto* signs = app.add_subcommand("signs", "sign selection")->require_subcommand(1);
    {
        auto* s = leaf(signs, "bound", "prefix-bounded or tail-controlled signs", cmd_signs_bound);
        window_opts(s);
        s->add_option("--mode", o.mode, "bounded | tail");
        s->add_option("--out", o.out);
        auto* t = leaf(signs, "target", "signs approximating a target", cmd_signs_target);
        window_opts(t);
        t->add_option("--mode", o.mode, "greedy | complex");
        t->add_option("--target", o.target, "a+bi");
        t->add_option("--eps", o.eps);
        t->add_option("--depth", o.depth);
        t->add_option("--threshold", o.threshold, "ratio mass threshold");
        t->add_option("--out", o.out);
    }

    auto* ratio = app.add_subcommand("ratio", "ratio analysis")->require_subcommand(1);
    {
        auto* s = leaf(ratio, "report", "ratio extraction, detection and direction profile", cmd_ratio_report);
        window_opts(s);
        s->add_option("--depth", o.depth);
        s->add_option("--threshold", o.threshold, "ratio mass threshold");
        s->add_option("--directions", o.directions)->check(CLI::Range(std::size_t{4}, std::size_t{1} << 20));
        s->add_option("--out", o.out);
        s->add_option("--profile-csv", o.csv);
    }

    auto* moran = app.add_subcommand("moran", "two-ratio Moran construction")->require_subcommand(1);
    {
        auto construction = [&](CLI::App* s) {
            s->add_option("--delta", o.delta)->check(CLI::Range(1e-6, 1.0 - 1e-6));
            s->add_option("--levels", o.levels)->check(CLI::Range(std::size_t{1}, std::size_t{40}));
            s->add_option("--ratioA", o.ratioA);
            s->add_option("--ratioB", o.ratioB);
            s->add_option("--out", o.out);
        };
        construction(leaf(moran, "build", "build the system and write it as JSON", cmd_moran_build));
        construction(leaf(moran, "check", "brackets and covering verdicts", cmd_moran_check));
        auto* s = leaf(moran, "render", "rasterize attractor points", cmd_moran_render);
        construction(s);
        s->add_option("--system", o.system_file, "system JSON from moran build");
        s->add_option("--depth", o.render_depth);
        s->add_option("--width", o.width);
        s->add_option("--height", o.height);
        s->add_option("--rect", o.rect, "x0,x1,y0,y1");
        s->add_option("--csv", o.csv, "attractor point cloud");
        s->add_option("--raster-csv", o.raster_csv);
    }

    auto* oracle = app.add_subcommand("oracle", "exhaustive oracles")->require_subcommand(1);
    {
        auto* s = leaf(oracle, "range", "exact finite range as CSV", cmd_oracle_range);
        window_opts(s);
        s->add_option("--out", o.out);
        s = leaf(oracle, "disc", "minimal prefix discrepancy", cmd_oracle_disc);
        window_opts(s);
        s->add_option("--out", o.out);
        s = leaf(oracle, "equiv", "linear-map equivariance", cmd_oracle_equiv);
        window_opts(s);
        s->add_option("--matrix", o.matrix, "m11,m12,m21,m22");
        s->add_option("--out", o.out);
        s = leaf(oracle, "coverage", "epsilon-net coverage of the range", cmd_oracle_coverage);
        window_opts(s);
        s->add_option("--rect", o.rect, "x0,x1,y0,y1");
        s->add_option("--epsilon", o.epsilon);
        s->add_option("--out", o.out);
    }

    auto* range = app.add_subcommand("range", "range rendering")->require_subcommand(1);
    {
        auto* s = leaf(range, "raster", "exact range as a P2 raster", cmd_range_raster);
        window_opts(s);
        s->add_option("--width", o.width);
        s->add_option("--height", o.height);
        s->add_option("--rect", o.rect, "x0,x1,y0,y1");
        s->add_option("--out", o.out);
        s->add_option("--csv", o.csv);
    }

    auto set_opts = [&](CLI::App* s) {
        s->add_option("--kind", o.kind, "progression | squares | explicit");
        s->add_option("--q", o.q);
        s->add_option("--j", o.j);
        s->add_option("--members", o.members, "explicit members, e.g. 10,20,30");
        s->add_option("--out", o.out);
    };
    {
        auto* s = leaf(&app, "density", "upper and lower density estimates", cmd_density);
        set_opts(s);
        s->add_option("--horizon", o.horizon);
        s = leaf(&app, "holder", "deletion-map Hoelder check", cmd_holder);
        set_opts(s);
        s->add_option("--eps", o.holder_eps);
        s->add_option("--samples", o.samples);
        s->add_option("--length", o.length);
        s = leaf(&app, "boxdim", "box-counting estimate over sign prefixes", cmd_boxdim);
        s->add_option("--predicate", o.predicate, "all | fix-first | even-plus | ball");
        s->add_option("--depth", o.depth);
        s->add_option("--in", o.in);
        s->add_option("--count", o.count);
        s->add_option("--target", o.target);
        s->add_option("--delta", o.ball_delta);
        s->add_option("--out", o.out);
        s->add_option("--csv", o.csv);
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << kToolName << " " << kToolVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--threads" || args[i] == "--seed") {
                ++i;
            } else if (args[i].empty() || args[i][0] != '-') {
                if (app.get_subcommand_no_throw(args[i]) == nullptr) {
                    err << "error: kind=unknown-subcommand message=" << one_line(args[i]) << "\n";
                    return kInvalid;
                }
                break;
            }
        }
        err << "error: kind=invalid-argument message=" << one_line(e.what()) << "\n";
        return kInvalid;
    }
    if (!action) {
        err << "error: kind=invalid-argument message=no subcommand given\n";
        return kInvalid;
    }

    r.config["command"] = name;
    if (!o.in.empty()) {
        r.config["in"] = o.in;
    }
    try {
        return action(r);
    } catch (const Error& e) {
        err << "error: kind=" << to_string(e.kind()) << " message=" << one_line(e.what()) << "\n";
        return e.kind() == ErrorKind::BracketViolation ? kFinding : kInvalid;
    } catch (const std::exception& e) {
        err << "error: kind=internal message=" << one_line(e.what()) << "\n";
        return kInvalid;
    }
}

} // namespace signrange::cli
