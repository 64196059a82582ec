#include <cslab/io.hpp>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cslab {

namespace {

std::vector<std::string> split_whitespace(const std::string& line)
{
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

bool try_parse_double(std::string_view text, double& v)
{
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

std::int64_t parse_dimension(const std::string& token, int line)
{
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v < 0)
    throw IoError("matrix line " + std::to_string(line) + ": bad dimension '" + token + "'");
  return v;
}

template <typename Derived>
void write_matrix_impl(std::ostream& out, const Eigen::MatrixBase<Derived>& A, bool is_complex)
{
  out << A.rows() << ' ' << A.cols() << ' ' << (is_complex ? "complex" : "real") << '\n';
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      if (j > 0) out << ' ';
      if constexpr (std::is_same_v<typename Derived::Scalar, complexd>)
        out << format_double(A(i, j).real()) << ':' << format_double(A(i, j).imag());
      else
        out << format_double(A(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("matrix: write failed");
}

std::ofstream open_out(const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return in;
}

std::string csv_field(const std::string& field)
{
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string yes_no(bool v) { return v ? "true" : "false"; }

std::string svg_escape(const std::string& text)
{
  std::string out;
  for (char ch : text) {
    switch (ch) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    default: out += ch;
    }
  }
  return out;
}

} // namespace

std::string format_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text)
{
  double v = 0.0;
  if (!try_parse_double(text, v)) throw IoError("not a number: '" + text + "'");
  return v;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& A) { write_matrix_impl(out, A, false); }
void write_matrix(std::ostream& out, const Eigen::MatrixXcd& A) { write_matrix_impl(out, A, true); }

MatrixFile read_matrix(std::istream& in)
{
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw IoError("matrix: empty input");
  const auto header = split_whitespace(line);
  if (header.size() != 3) throw IoError("matrix line 1: expected 'm N real|complex'");
  const auto m = parse_dimension(header[0], line_no);
  const auto N = parse_dimension(header[1], line_no);
  MatrixFile file;
  if (header[2] == "complex")
    file.is_complex = true;
  else if (header[2] != "real")
    throw IoError("matrix line 1: field must be real or complex, got '" + header[2] + "'");

  file.values.resize(m, N);
  for (std::int64_t i = 0; i < m; ++i) {
    if (!next_line())
      throw IoError("matrix: expected " + std::to_string(m) + " rows, found " + std::to_string(i));
    const auto tokens = split_whitespace(line);
    if (static_cast<std::int64_t>(tokens.size()) != N)
      throw IoError("matrix line " + std::to_string(line_no) + ": expected "
                    + std::to_string(N) + " entries, found " + std::to_string(tokens.size()));
    for (std::int64_t j = 0; j < N; ++j) {
      const auto& tok = tokens[static_cast<std::size_t>(j)];
      double re = 0.0, im = 0.0;
      const auto colon = tok.find(':');
      bool ok = false;
      if (file.is_complex && colon != std::string::npos) {
        ok = try_parse_double(std::string_view(tok).substr(0, colon), re)
             && try_parse_double(std::string_view(tok).substr(colon + 1), im);
      } else if (colon == std::string::npos) {
        ok = try_parse_double(tok, re);
      }
      if (!ok)
        throw IoError("matrix line " + std::to_string(line_no) + ": bad entry '" + tok + "'");
      file.values(i, j) = complexd(re, im);
    }
  }
  if (next_line()) throw IoError("matrix line " + std::to_string(line_no) + ": trailing data");
  return file;
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& A)
{
  auto out = open_out(path);
  write_matrix(out, A);
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& A)
{
  auto out = open_out(path);
  write_matrix(out, A);
}

MatrixFile read_matrix(const std::filesystem::path& path)
{
  auto in = open_in(path);
  try {
    return read_matrix(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_csv(std::ostream& out, const CsvTable& table)
{
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out << ',';
      out << csv_field(row[k]);
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw DomainError("csv: row has " + std::to_string(row.size()) + " fields, header has "
                        + std::to_string(table.header.size()));
    write_row(row);
  }
  if (!out) throw IoError("csv: write failed");
}

void write_csv(const std::filesystem::path& path, const CsvTable& table)
{
  auto out = open_out(path);
  write_csv(out, table);
}

CsvTable read_csv(std::istream& in)
{
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, any = false;
  char ch;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    any = false;
  };
  while (in.get(ch)) {
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    switch (ch) {
    case '"': quoted = true; any = true; break;
    case ',': end_field(); any = true; break;
    case '\r': break;
    case '\n': end_record(); break;
    default: field += ch; any = true;
    }
  }
  if (quoted) throw IoError("csv: unterminated quoted field");
  if (any) end_record();
  if (records.empty()) throw IoError("csv: missing header row");

  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t k = 1; k < records.size(); ++k) {
    if (records[k].size() != table.header.size())
      throw IoError("csv record " + std::to_string(k + 1) + ": wrong number of fields");
    table.rows.push_back(std::move(records[k]));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path)
{
  auto in = open_in(path);
  return read_csv(in);
}

CsvTable rate_csv(const std::vector<RateEstimate>& rates)
{
  CsvTable t{{"successes", "trials", "rate", "wilson_low", "wilson_high"}, {}};
  for (const auto& r : rates)
    t.rows.push_back({std::to_string(r.successes), std::to_string(r.trials), format_double(r.rate),
                      format_double(r.wilson_low), format_double(r.wilson_high)});
  return t;
}

CsvTable recovery_records_csv(const std::vector<RecoveryRecord>& records)
{
  CsvTable t{{"trial", "seed", "certificate_holds", "max_correlation", "solver_converged",
              "solver_recovered", "solver_iterations", "recovery_error", "success"},
             {}};
  for (const auto& r : records)
    t.rows.push_back({std::to_string(r.trial), std::to_string(r.seed), yes_no(r.certificate_holds),
                      format_double(r.max_correlation), yes_no(r.solver_converged),
                      yes_no(r.solver_recovered), std::to_string(r.solver_iterations),
                      format_double(r.recovery_error), yes_no(r.success)});
  return t;
}

CsvTable phase_grid_csv(const PhaseGrid& grid)
{
  CsvTable t{{"s", "m", "successes", "trials", "rate", "wilson_low", "wilson_high", "overlay_m"}, {}};
  for (std::size_t i = 0; i < grid.s_values.size(); ++i) {
    std::string overlay;
    if (i < grid.overlay.size())
      overlay = grid.overlay[i].m ? std::to_string(*grid.overlay[i].m) : "error";
    for (std::size_t j = 0; j < grid.m_values.size(); ++j) {
      const auto& r = grid.at(i, j);
      t.rows.push_back({std::to_string(grid.s_values[i]), std::to_string(grid.m_values[j]),
                        std::to_string(r.successes), std::to_string(r.trials),
                        format_double(r.rate), format_double(r.wilson_low),
                        format_double(r.wilson_high), overlay});
    }
  }
  return t;
}

CsvTable tail_table_csv(const TailTable& table)
{
  CsvTable t{{"bound", "parameter", "exceedances", "trials", "frequency", "bound_value", "slack",
              "passes"},
             {}};
  for (const auto& r : table)
    t.rows.push_back({r.bound_name, format_double(r.parameter), std::to_string(r.exceedances),
                      std::to_string(r.trials), format_double(r.frequency),
                      format_double(r.bound), format_double(r.slack), yes_no(r.passes)});
  return t;
}

CsvTable gram_csv(const GramResult& g)
{
  CsvTable t{{"m", "successes", "trials", "rate", "wilson_low", "wilson_high", "target", "slack",
              "passes"},
             {}};
  t.rows.push_back({std::to_string(g.m), std::to_string(g.rate.successes),
                    std::to_string(g.rate.trials), format_double(g.rate.rate),
                    format_double(g.rate.wilson_low), format_double(g.rate.wilson_high),
                    format_double(g.target), format_double(g.slack), yes_no(g.passes)});
  return t;
}

std::string phase_grid_svg(const PhaseGrid& grid)
{
  constexpr double cell_w = 48.0, cell_h = 32.0, left = 60.0, top = 20.0, bottom = 50.0;
  const auto cols = static_cast<double>(grid.m_values.size());
  const auto rows = static_cast<double>(grid.s_values.size());
  const double width = left + cols * cell_w + 20.0;
  const double height = top + rows * cell_h + bottom;

  // Row 0 of the picture is the largest s, so s grows upwards.
  auto row_y = [&](std::size_t i) { return top + (rows - 1.0 - static_cast<double>(i)) * cell_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < grid.s_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.m_values.size(); ++j) {
      const int level = static_cast<int>(std::lround(255.0 * grid.at(i, j).rate));
      svg << "<rect x=\"" << left + static_cast<double>(j) * cell_w << "\" y=\"" << row_y(i)
          << "\" width=\"" << cell_w << "\" height=\"" << cell_h << "\" fill=\"rgb(" << level
          << ',' << level << ',' << level << ")\"><title>s=" << grid.s_values[i]
          << " m=" << grid.m_values[j] << " rate=" << grid.at(i, j).rate << "</title></rect>\n";
    }
    svg << "<text x=\"" << left - 6.0 << "\" y=\"" << row_y(i) + cell_h / 2.0 + 4.0
        << "\" text-anchor=\"end\">" << grid.s_values[i] << "</text>\n";
  }
  for (std::size_t j = 0; j < grid.m_values.size(); ++j)
    svg << "<text x=\"" << left + (static_cast<double>(j) + 0.5) * cell_w << "\" y=\""
        << top + rows * cell_h + 16.0 << "\" text-anchor=\"middle\">" << grid.m_values[j]
        << "</text>\n";
  svg << "<text x=\"" << left + cols * cell_w / 2.0 << "\" y=\"" << height - 8.0
      << "\" text-anchor=\"middle\">m</text>\n";
  svg << "<text x=\"14\" y=\"" << top + rows * cell_h / 2.0 << "\">s</text>\n";

  // Overlay: the bound's m mapped piecewise linearly onto the column centers.
  auto column_x = [&](double m) {
    const auto& mv = grid.m_values;
    if (mv.size() == 1 || m <= static_cast<double>(mv.front())) return left + 0.5 * cell_w;
    for (std::size_t j = 1; j < mv.size(); ++j) {
      const double a = static_cast<double>(mv[j - 1]), b = static_cast<double>(mv[j]);
      if (m <= b) {
        const double f = b > a ? (m - a) / (b - a) : 0.0;
        return left + (static_cast<double>(j - 1) + 0.5 + f) * cell_w;
      }
    }
    return left + (cols - 0.5) * cell_w;
  };
  std::ostringstream points;
  std::size_t defined = 0;
  for (std::size_t i = 0; i < grid.overlay.size(); ++i) {
    if (!grid.overlay[i].m) continue;
    points << (defined++ ? " " : "") << column_x(static_cast<double>(*grid.overlay[i].m)) << ','
           << row_y(i) + cell_h / 2.0;
  }
  if (defined > 0)
    svg << "<polyline points=\"" << points.str()
        << "\" fill=\"none\" stroke=\"rgb(220,40,40)\" stroke-width=\"2\"/>\n";
  for (std::size_t i = 0; i < grid.overlay.size(); ++i)
    if (!grid.overlay[i].m)
      svg << "<!-- overlay undefined at s=" << grid.overlay[i].s << ": "
          << svg_escape(grid.overlay[i].error) << " -->\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string to_json(const RunManifest& m)
{
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["arguments"] = m.arguments;
  j["parameters"] = m.parameters;
  j["master_seed"] = m.master_seed;
  j["version"] = m.version;
  j["duration_seconds"] = m.duration_seconds;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text)
{
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.arguments = j.at("arguments").get<std::vector<std::string>>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    m.duration_seconds = j.at("duration_seconds").get<double>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("manifest: ") + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace cslab
