#ifndef POLYFREE_JOB_HPP_
#define POLYFREE_JOB_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyfree/twisted.hpp"

namespace polyfree {

struct JobParseError : std::runtime_error {
  JobParseError(size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_number(line) {}
  size_t line_number;
};

struct JobOptions {
  int ball = 3;
  int conj = 4;
  int jobs = 1;
};

/// Command-line overrides; negative means "keep the job's value".
struct JobOverrides {
  int ball = -1;
  int conj = -1;
  int jobs = -1;
};

// Exit codes: 0 ok, 2 parse/validation, 3 verification failure,
// 4 undecided certificate, 5 resource cap.
struct Report {
  std::vector<std::string> lines;
  int exit_code = 0;

  std::string to_text(const std::string& format) const;
};

/// Parses and validates a job (group block, action lines, morphisms,
/// families, commands), then runs every command in order.
Report run_job_text(const std::string& text, const JobOverrides& overrides = {});

int combine_exit_codes(int a, int b);

}  // namespace polyfree

#endif  // POLYFREE_JOB_HPP_
