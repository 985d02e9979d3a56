#include "signrange/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "signrange/error.hpp"

namespace signrange {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

double parse_real(const std::string& s, const std::string& whole) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, last, v);
    require(first != last && res.ec == std::errc{} && res.ptr == last && std::isfinite(v), ErrorKind::InvalidArgument,
            "cannot parse number '" + s + "' in '" + whole + "'");
    return v;
}

std::string trim(std::string s) {
    std::string out;
    for (char c : s) {
        if (c != ' ' && c != '\t') {
            out.push_back(c);
        }
    }
    return out;
}

} // namespace

Complex2 parse_complex(const std::string& text) {
    const std::string s = trim(text);
    require(!s.empty(), ErrorKind::InvalidArgument, "empty complex literal");
    if (s.back() != 'i') {
        return {parse_real(s, text), 0.0};
    }
    const std::string body = s.substr(0, s.size() - 1);
    // Split before the last sign that is not a leading sign or an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    const std::string re = split == std::string::npos ? "" : body.substr(0, split);
    std::string im = split == std::string::npos ? body : body.substr(split);
    if (im.empty() || im == "+") {
        im = "1";
    } else if (im == "-") {
        im = "-1";
    }
    return {re.empty() ? 0.0 : parse_real(re, text), parse_real(im, text)};
}

std::string format_complex(Complex2 c) {
    std::string im = format_double(c.im);
    if (im.front() != '-') {
        im = "+" + im;
    }
    return format_double(c.re) + im + "i";
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(trim(text));
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_real(item, text));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_real_list(text)) {
        require(v == std::floor(v) && std::abs(v) < 1e9, ErrorKind::InvalidArgument, "expected integers in '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

Json complex_to_json(Complex2 c) { return Json::array({c.re, c.im}); }

Complex2 complex_from_json(const Json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_string()) {
        return parse_complex(j.get<std::string>());
    }
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), ErrorKind::InvalidArgument,
            "complex values are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json points_to_json(std::span<const Complex2> points) {
    Json arr = Json::array();
    for (const auto& p : points) {
        arr.push_back(complex_to_json(p));
    }
    return arr;
}

namespace {

RatioValue ratio_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        require(s == "inf" || s == "infinity", ErrorKind::InvalidArgument, "ratio must be a number or \"inf\"");
        return RatioValue::infinity();
    }
    require(j.is_number(), ErrorKind::InvalidArgument, "ratio must be a number or \"inf\"");
    return RatioValue::finite(j.get<double>());
}

Json ratio_to_json(RatioValue t) { return t.infinite ? Json("inf") : Json(t.value); }

LinearRatioFamily linear_from_json(const Json& p) {
    LinearRatioFamily f;
    if (p.contains("t")) {
        f.t = ratio_from_json(p.at("t"));
    }
    f.scale = p.value("scale", 1.0);
    f.power = p.value("power", 1.0);
    return f;
}

Json linear_to_json(const LinearRatioFamily& f) {
    return Json{{"t", ratio_to_json(f.t)}, {"scale", f.scale}, {"power", f.power}};
}

} // namespace

SequenceSpec sequence_from_json(const Json& j) {
    try {
        require(j.is_object() && j.contains("family"), ErrorKind::InvalidArgument, "sequence record needs \"family\"");
        const auto name = j.at("family").get<std::string>();
        const Json params = j.value("params", Json::object());
        SequenceSpec spec;
        if (name == "explicit") {
            ExplicitFamily f;
            for (const auto& t : j.at("terms")) {
                f.terms.push_back(complex_from_json(t));
            }
            spec.family = std::move(f);
        } else if (name == "linear-ratio") {
            spec.family = linear_from_json(params);
        } else if (name == "harmonic-log-alt" || name == "example41") {
            spec.family = HarmonicLogAltFamily{};
        } else if (name == "dyadic-tower" || name == "example42") {
            spec.family = DyadicTowerFamily{params.at("m").get<std::vector<int>>(), params.at("n").get<std::vector<int>>()};
        } else if (name == "interleaved") {
            InterleavedFamily f;
            for (const auto& p : params.at("parts")) {
                f.parts.push_back(linear_from_json(p));
            }
            spec.family = std::move(f);
        } else {
            fail(ErrorKind::InvalidArgument, "unknown family '" + name + "'");
        }
        if (j.contains("limit") && !j.at("limit").is_null()) {
            spec.limit = j.at("limit").get<std::size_t>();
        }
        validate(spec);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("malformed sequence record: ") + e.what());
    }
}

Json sequence_to_json(const SequenceSpec& spec) {
    Json j;
    j["family"] = family_name(spec);
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, ExplicitFamily>) {
                j["terms"] = points_to_json(f.terms);
            } else if constexpr (std::is_same_v<F, LinearRatioFamily>) {
                j["params"] = linear_to_json(f);
            } else if constexpr (std::is_same_v<F, HarmonicLogAltFamily>) {
                j["params"] = Json::object();
            } else if constexpr (std::is_same_v<F, DyadicTowerFamily>) {
                j["params"] = Json{{"m", f.m}, {"n", f.n}};
            } else {
                Json parts = Json::array();
                for (const auto& p : f.parts) {
                    parts.push_back(linear_to_json(p));
                }
                j["params"] = Json{{"parts", parts}};
            }
        },
        spec.family);
    j["limit"] = spec.limit ? Json(*spec.limit) : Json(nullptr);
    return j;
}

SignVector signs_from_json(const Json& j) {
    require(j.is_object() && j.contains("signs") && j.at("signs").is_array(), ErrorKind::InvalidArgument,
            "sign record needs a \"signs\" array");
    std::vector<int> v;
    for (const auto& s : j.at("signs")) {
        require(s.is_number_integer(), ErrorKind::InvalidArgument, "signs must be the integers 1 or -1");
        v.push_back(s.get<int>());
    }
    return SignVector(std::span<const int>(v));
}

Json signs_to_json(const SignVector& s) { return Json{{"signs", s.to_ints()}}; }

Rational rational_from_json(const Json& j) {
    require(j.is_object() && j.contains("num") && j.contains("den"), ErrorKind::InvalidArgument,
            "rationals are {\"num\": p, \"den\": q}");
    return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json_file(const std::string& path) {
    const auto text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Io, "'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write '" + path + "'");
    out << text;
    require(static_cast<bool>(out), ErrorKind::Io, "write to '" + path + "' failed");
}

Json meta_record(const Json& config) { return Json{{"tool", kToolName}, {"version", kToolVersion}, {"config", config}}; }

std::string meta_comment(const Json& config) {
    return std::string("# ") + kToolName + " " + kToolVersion + " config=" + config.dump() + "\n";
}

std::string points_csv(const Json& config, std::span<const Complex2> points) {
    std::string out = meta_comment(config) + "re,im\n";
    for (const auto& p : points) {
        out += format_double(p.re) + "," + format_double(p.im) + "\n";
    }
    return out;
}

Raster rasterize(std::span<const Complex2> points, const Rect& window, std::size_t width, std::size_t height) {
    require(width >= 1 && height >= 1 && width * height <= (std::size_t{1} << 26), ErrorKind::InvalidArgument,
            "raster size must be positive and at most 2^26 pixels");
    require(window.valid(), ErrorKind::InvalidArgument, "raster window has inverted bounds");
    Raster r{width, height, std::vector<std::uint32_t>(width * height, 0)};
    const double wx = window.x1 - window.x0, wy = window.y1 - window.y0;
    for (const auto& p : points) {
        if (!window.contains(p)) {
            continue;
        }
        const auto col = wx > 0 ? std::min(width - 1, static_cast<std::size_t>((p.re - window.x0) / wx * width)) : 0;
        const auto row = wy > 0 ? std::min(height - 1, static_cast<std::size_t>((window.y1 - p.im) / wy * height)) : 0;
        ++r.counts[row * width + col];
    }
    return r;
}

std::string raster_pgm(const Json& config, const Raster& raster) {
    std::string out = "P2\n" + meta_comment(config) + std::to_string(raster.width) + " " +
                      std::to_string(raster.height) + "\n255\n";
    for (std::size_t row = 0; row < raster.height; ++row) {
        for (std::size_t col = 0; col < raster.width; ++col) {
            out += raster.counts[row * raster.width + col] ? "255" : "0";
            out += col + 1 < raster.width ? " " : "\n";
        }
    }
    return out;
}

std::string raster_csv(const Json& config, const Raster& raster) {
    std::string out = meta_comment(config) + "row,col,count\n";
    for (std::size_t row = 0; row < raster.height; ++row) {
        for (std::size_t col = 0; col < raster.width; ++col) {
            if (const auto c = raster.counts[row * raster.width + col]) {
                out += std::to_string(row) + "," + std::to_string(col) + "," + std::to_string(c) + "\n";
            }
        }
    }
    return out;
}

} // namespace signrange
