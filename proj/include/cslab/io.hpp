#ifndef CSLAB_IO_HPP
#define CSLAB_IO_HPP

#include <cslab/experiments.hpp>
#include <cslab/linalg.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cslab {

// ---------------------------------------------------------------------------
// Plain-text matrices:
//   m N real|complex
//   m lines of N whitespace-separated entries, complex entries as re:im
// Values are written with 17 significant digits, so a write/read cycle is
// bit-exact.

struct MatrixFile
{
  bool is_complex = false;
  Eigen::MatrixXcd values; // imaginary parts are zero for real files

  Eigen::MatrixXd real() const { return values.real(); }
};

void write_matrix(std::ostream& out, const Eigen::MatrixXd& A);
void write_matrix(std::ostream& out, const Eigen::MatrixXcd& A);
MatrixFile read_matrix(std::istream& in);

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& A);
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& A);
MatrixFile read_matrix(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// CSV with a header row. Fields containing separators, quotes or line breaks
// are quoted, with embedded quotes doubled.

struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_double(double v); // %.17g
double parse_double(const std::string& text);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

// Fixed schemas.
CsvTable rate_csv(const std::vector<RateEstimate>& rates);            // successes,trials,rate,wilson_low,wilson_high
CsvTable recovery_records_csv(const std::vector<RecoveryRecord>& records);
CsvTable phase_grid_csv(const PhaseGrid& grid);                       // one row per (s, m)
CsvTable tail_table_csv(const TailTable& table);
CsvTable gram_csv(const GramResult& result);

// Gray-scale heatmap of the grid (rate 0 black, 1 white), with the overlay
// bound drawn as a polyline where it is defined.
std::string phase_grid_svg(const PhaseGrid& grid);

// ---------------------------------------------------------------------------

struct RunManifest
{
  std::string command;
  std::vector<std::string> arguments;           // argv after the program name
  std::map<std::string, std::string> parameters; // every resolved option value
  std::uint64_t master_seed = 0;
  std::string version;
  double duration_seconds = 0.0;
  std::vector<std::string> outputs;
};

std::string to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace cslab

#endif
