#pragma once

// Run configuration, command dispatch and CSV/JSON reporting for the shellbound tool.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shellbound/web.hpp"

namespace shellbound {

using Json = nlohmann::ordered_json;

struct BetaGrid {
  double min = 0.01;
  double max = 100;
  int count = 20;
  bool log = true;

  std::vector<double> values() const;
};

/// "min,max,count[,log|lin]"
BetaGrid parse_beta_grid(const std::string& text);

struct RunConfig {
  std::string command;
  int n = 2;
  double p = 2;
  std::optional<double> beta;
  std::optional<BetaGrid> beta_grid;
  double r1 = 1;
  double r2 = 2;
  std::string domain_file;
  std::string fixture;      // built-in domain name, see fixture_names()
  std::string body;         // quermass: "ball:r", "cuboid:a,b,c", "cube:a", "disk:r"
  std::string quantity = "eigen";  // sweep-beta: eigen | torsion
  std::optional<double> q_exponent;
  double h = 0.05;
  double tol = 1e-8;
  int t_count = 64;
  int random_hulls = 0;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool timing = false;

  /// Throws ValidationError on p <= 1, beta <= 0, h <= 0 and malformed combinations.
  void validate() const;
};

/// One line of a tabular report; doubles are printed with "%.17g".
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string format_double(double x);

struct RunResult {
  Json report;
  Table table;
  bool pass = true;
};

/// Executes one command. Throws on invalid input; an asserted inequality that fails only
/// clears `pass` and lists the failure under "failures".
RunResult run(const RunConfig& config);

std::string to_csv(const Table& table);

/// {"status": "error", "error": {"type", "message"}} plus a trace when the solver supplied one.
Json failure_json(const std::exception& e);

// Domains.

/// Reads {"outer": [[x, y], ...], "hole": [[x, y], ...]}; clockwise loops are reversed and
/// a warning appended to `warnings`.
DomainSpec domain_from_json(const Json& j, std::vector<std::string>* warnings = nullptr);
Json domain_to_json(const DomainSpec& domain);

std::vector<std::string> fixture_names();
/// The shell-identity fixture depends on h: regular N-gons with N = ceil(2 pi R / h), the hole
/// scaled to perimeter 2 pi and the outer polygon to |Sigma| = 3 pi, so the matched shell is (1, 2).
DomainSpec fixture_domain(const std::string& name, double h = 0.05);

/// Number of sweep workers: SHELLSPEC_THREADS when set and positive, else hardware concurrency.
int worker_count();

Json to_json(const QuermassVector<double>& q);
Json to_json(const AfReport<double>& af);
Json to_json(const WebChainReport& report);
Json to_json(const ChainCheck& check);

/// Applies `f` to 0..count-1 on the worker pool; results are stored by index.
template <typename T, typename F>
std::vector<T> parallel_map(int count, F&& f);

}  // namespace shellbound

#include "shellbound/detail/parallel.hpp"
