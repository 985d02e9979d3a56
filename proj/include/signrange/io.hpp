#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "signrange/complex2.hpp"
#include "signrange/rational.hpp"
#include "signrange/sequence.hpp"
#include "signrange/signs.hpp"

namespace signrange {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "signrange";
inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest round-trip decimal form.
std::string format_double(double x);

/// "a+bi" with decimal components; also "a", "bi", "i", "-i", "a-i".
Complex2 parse_complex(const std::string& text);
std::string format_complex(Complex2 c);

/// Comma-separated reals or integers, e.g. "0,1,2".
std::vector<double> parse_real_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// Sequence files: {"family": name, "params": {...}, "limit": N} or
/// {"family": "explicit", "terms": [[re, im], ...]}.
SequenceSpec sequence_from_json(const Json& j);
Json sequence_to_json(const SequenceSpec& spec);

SignVector signs_from_json(const Json& j);
Json signs_to_json(const SignVector& s);

Rational rational_from_json(const Json& j);

Json complex_to_json(Complex2 c);
Complex2 complex_from_json(const Json& j);
Json points_to_json(std::span<const Complex2> points);

Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// {"tool", "version", "config"} record embedded in every artifact.
Json meta_record(const Json& config);
/// "# signrange 0.1.0 config=<compact json>" header line for CSV and P2 artifacts.
std::string meta_comment(const Json& config);

/// CSV with a meta comment and a header row.
std::string points_csv(const Json& config, std::span<const Complex2> points);

/// Occupancy raster: rows run from y1 (top) down to y0, columns from x0 to x1.
struct Raster {
    std::size_t width = 0, height = 0;
    std::vector<std::uint32_t> counts; ///< row-major
};
Raster rasterize(std::span<const Complex2> points, const Rect& window, std::size_t width, std::size_t height);

/// Portable graymap (plain P2): 0 = empty, 255 = occupied.
std::string raster_pgm(const Json& config, const Raster& raster);
/// CSV twin of the raster: "row,col,count" for every occupied pixel.
std::string raster_csv(const Json& config, const Raster& raster);

} // namespace signrange
