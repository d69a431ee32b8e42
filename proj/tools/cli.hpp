#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bianchi/bianchi_data.hpp"
#include "bianchi/ring.hpp"

namespace bianchi::cli {

constexpr int kSchemaVersion = 1;

enum class Format { Text, Json };

struct Plan {
  std::string command;  // empty with help set: print usage only
  int64_t d = 0;
  std::string ideal_text;
  std::vector<QuadInt> gens;
  bool gamma1 = false;
  std::optional<size_t> budget;
  std::string cache_dir;
  std::string out;
  std::vector<std::string> paths;
  int jobs = 1;
  Format format = Format::Text;
  bool stats = false;
  int64_t max_norm = 10;
  std::vector<PeripheralTriple> triples;
  std::string help;
};

// args excludes the program name.
Plan parse_invocation(const std::vector<std::string>& args);

struct Outcome {
  int exit_code = 0;
  std::string report;
};

Outcome execute_plan(const Plan& plan);

// Parses, executes and maps every error to the exit-code contract.
int run(const std::vector<std::string>& args, std::string& out, std::string& err);

struct SurveyRow {
  int64_t d = 0;
  QuadIdeal ideal;
  std::string ideal_str;
  int64_t norm = 0;
  uint64_t psl = 0;
  std::string method;
  std::string result;
};

std::vector<SurveyRow> run_survey(const std::vector<int64_t>& ds, int64_t max_norm, size_t budget, int jobs);

// One row, independent of the others.
SurveyRow survey_row(int64_t d, const QuadIdeal& I, size_t budget);

// Some relator w^k has a proper power of w trivial mod I.
bool orbifold_by_relators(const BianchiGroup& G, const QuadIdeal& I);

}  // namespace bianchi::cli
