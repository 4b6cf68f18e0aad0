#include "softstab/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace softstab {

using nlohmann::json;

namespace {

// Line number of a byte offset into text (1-based).
std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("JSON syntax error at line " + std::to_string(line_of(text, e.byte)) + ": " +
                     e.what());
  }
}

const json& field(const json& doc, const char* name) {
  if (!doc.is_object()) throw ParseError("system JSON must be an object");
  const auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError("field '" + where + "' must hold numbers");
  return v.get<double>();
}

std::vector<double> number_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError("field '" + where + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

json encode(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

json encode(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(encode(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

AffineLogitSystem parse_system_json(std::string_view text) {
  const json doc = parse_document(text);

  const json& dims_json = field(doc, "block_dims");
  if (!dims_json.is_array() || dims_json.empty())
    throw ParseError("field 'block_dims' must be a non-empty array");
  std::vector<Index> dims;
  for (const auto& d : dims_json) {
    if (!d.is_number_integer() || d.get<long long>() < 1)
      throw ParseError("field 'block_dims' must hold positive integers");
    dims.push_back(static_cast<Index>(d.get<long long>()));
  }
  BlockLayout layout(dims);
  const Index n = layout.total();

  const std::vector<double> beta = number_array(field(doc, "beta"), "beta");
  if (static_cast<Index>(beta.size()) != layout.num_blocks())
    throw ValidationError("field 'beta' needs one entry per block (" +
                          std::to_string(layout.num_blocks()) + "), got " +
                          std::to_string(beta.size()));

  const json& w_json = field(doc, "W");
  if (!w_json.is_array() || static_cast<Index>(w_json.size()) != n)
    throw ValidationError("field 'W' must have " + std::to_string(n) + " rows");
  Eigen::MatrixXd w(n, n);
  for (Index i = 0; i < n; ++i) {
    const std::string where = "W[" + std::to_string(i) + "]";
    const auto row = number_array(w_json[static_cast<std::size_t>(i)], where);
    if (static_cast<Index>(row.size()) != n)
      throw ValidationError("field '" + where + "' must have " + std::to_string(n) + " entries");
    for (Index j = 0; j < n; ++j) w(i, j) = row[static_cast<std::size_t>(j)];
  }

  const std::vector<double> b = number_array(field(doc, "b"), "b");
  if (static_cast<Index>(b.size()) != n)
    throw ValidationError("field 'b' must have " + std::to_string(n) + " entries");

  try {
    return AffineLogitSystem(std::move(layout), std::move(w), to_vector(b), beta);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

AffineLogitSystem read_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open system file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system_json(ss.str());
}

std::string system_to_json(const AffineLogitSystem& system) {
  json doc;
  doc["block_dims"] = system.layout().dims();
  doc["beta"] = system.beta();
  doc["W"] = encode(system.W());
  doc["b"] = std::vector<double>(system.b().data(), system.b().data() + system.b().size());
  return doc.dump(2) + "\n";
}

ProductPointd parse_point_json(std::string_view text, const BlockLayout& layout) {
  const json doc = parse_document(text);
  if (!doc.is_array()) throw ParseError("start point must be a JSON array");
  std::vector<double> flat;
  if (!doc.empty() && doc.front().is_array()) {
    for (std::size_t a = 0; a < doc.size(); ++a) {
      const auto block = number_array(doc[a], "start[" + std::to_string(a) + "]");
      flat.insert(flat.end(), block.begin(), block.end());
    }
  } else {
    flat = number_array(doc, "start");
  }
  if (static_cast<Index>(flat.size()) != layout.total())
    throw ValidationError("start point has " + std::to_string(flat.size()) +
                          " entries, system needs " + std::to_string(layout.total()));
  try {
    return ProductPointd(layout, to_vector(flat));
  } catch (const Error& e) {
    throw ValidationError(std::string("start point: ") + e.what());
  }
}

std::string report_to_json(const CertificateReport& report) {
  json doc;
  const auto& c = report.contraction;
  doc["symmetric_w"] = report.symmetric_w;
  doc["q_old"] = encode(c.q_old);
  doc["q_new"] = encode(c.q_new);
  doc["kappa_scaled"] = report.symmetric ? encode(report.symmetric->kappa_scaled) : json(nullptr);
  doc["kappa"] = report.symmetric && report.symmetric->kappa ? encode(*report.symmetric->kappa)
                                                             : json(nullptr);
  doc["dobrushin_rho"] = encode(report.dobrushin.rho);
  doc["dobrushin_influence"] = encode(report.dobrushin.influence);
  if (report.beta_range) {
    doc["norm_ambient"] = encode(report.beta_range->norm_ambient);
    doc["norm_tangent"] = encode(report.beta_range->norm_tangent);
    doc["beta_old"] = encode(report.beta_range->beta_old);
    doc["beta_new"] = encode(report.beta_range->beta_new);
    doc["gain"] = encode(report.beta_range->gain);
  } else {
    for (const char* k : {"norm_ambient", "norm_tangent", "beta_old", "beta_new", "gain"})
      doc[k] = nullptr;
  }

  json verdicts;
  verdicts["old"] = to_string(c.old_verdict);
  verdicts["new"] = to_string(c.new_verdict);
  verdicts["symmetric"] =
      report.symmetric ? json(std::string(to_string(report.symmetric->verdict))) : json(nullptr);
  verdicts["dobrushin"] = to_string(report.dobrushin.verdict);
  doc["verdicts"] = verdicts;

  json margins;
  margins["old"] = encode(c.old_margin);
  margins["new"] = encode(c.new_margin);
  margins["symmetric"] = report.symmetric ? encode(report.symmetric->margin) : json(nullptr);
  margins["dobrushin"] = encode(report.dobrushin.margin);
  doc["margins"] = margins;
  if (report.symmetric) doc["nonpositive_branch"] = report.symmetric->nonpositive_branch;
  return doc.dump(2) + "\n";
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw Error("CsvWriter: wrong number of fields");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record) {
  std::vector<std::string> header{"step_or_time"};
  for (Index i = 0; i < record.layout.total(); ++i) header.push_back("x" + std::to_string(i));
  header.push_back("residual");
  header.push_back("envelope");
  CsvWriter csv(out, header);
  for (std::size_t k = 0; k < record.samples.size(); ++k) {
    std::vector<std::string> fields;
    fields.push_back(format_double(record.times[k]));
    for (Index i = 0; i < record.samples[k].size(); ++i)
      fields.push_back(format_double(record.samples[k][i]));
    // With sparse Picard sampling, the residual index is the step count.
    const auto step = record.kind == TrajectoryRecord::Kind::Picard
                          ? static_cast<std::size_t>(record.times[k])
                          : k;
    fields.push_back(step < record.residuals.size() ? format_double(record.residuals[step]) : "");
    const auto env = record.kind == TrajectoryRecord::Kind::Picard ? step : k;
    fields.push_back(env < record.envelope.size() ? format_double(record.envelope[env]) : "");
    csv.row(fields);
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace softstab
