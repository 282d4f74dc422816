#pragma once

// The acceptance suite: nine numbered checks, each a pass/fail with timing and
// a JSON record of every configuration it ran.

#include <cstdint>
#include <string>
#include <vector>

#include "lfrm/json_io.hpp"

namespace lfrm {

struct CriterionOptions {
  std::uint64_t seed = 1;
  int workers = 0;  // 0: hardware concurrency
  std::int64_t mc_samples = 100000;
  // Field for the auxiliary identity checks; the numbered criteria fix their own fields.
  std::string field = "padic:p=3,prec=12";
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool checks_pass = false;  // every numeric check
  double seconds = 0;
  double time_limit = 0;
  bool pass = false;  // checks_pass and within the time limit
  std::string summary;
  Json details;
};

inline constexpr int kCriterionCount = 9;

std::string criterion_name(int id);
double criterion_time_limit(int id);
CriterionResult run_criterion(int id, const CriterionOptions& opt);

// Identity checks on opt.field that back up criteria 1 and 2: ball Fourier
// averages are ball indicators, and theta/Theta closed forms match brute force.
CriterionResult run_identity_aux(const CriterionOptions& opt);

Json to_json(const CriterionResult& r);
// "criterion 4 [orbital-integral bounds]: FAIL (36 configs, ...) 12.3 s / 300 s"
std::string summary_line(const CriterionResult& r);

}  // namespace lfrm
