#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "softstab/certificates.hpp"
#include "softstab/dynamics.hpp"
#include "softstab/system.hpp"

namespace softstab {

/// Shortest text that reads back to the same double (17 significant digits,
/// '.' decimal point, "inf"/"-inf"/"nan" for non-finite values).
std::string format_double(double x);

/// System JSON: {"block_dims": [...], "beta": [...], "W": [[row], ...], "b": [...]}.
/// Throws ParseError (with a line number or field name) on malformed input and
/// ValidationError on inconsistent dimensions or values.
AffineLogitSystem parse_system_json(std::string_view text);
AffineLogitSystem read_system_file(const std::string& path);
std::string system_to_json(const AffineLogitSystem& system);

/// Parses a point given as a flat array [..] or as an array of blocks [[..], ..].
ProductPointd parse_point_json(std::string_view text, const BlockLayout& layout);

/// Certificate report as indented JSON. Infinite values are written as the
/// string "inf"; absent certificates as null.
std::string report_to_json(const CertificateReport& report);

/// Columns step_or_time, x0..x{N-1}, residual, envelope. Picard rows carry the
/// step residual ||x_{k+1} - x_k|| (empty on the last row); missing envelope
/// values are empty fields.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record);

/// Minimal CSV writer: one header line, then rows of preformatted fields.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

/// Writes `content` to `path`, throwing Error on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace softstab
