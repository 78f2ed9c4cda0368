#pragma once

#include <string>

#include "sizelab/checker.hpp"
#include "sizelab/labelling.hpp"

namespace sizelab {

inline constexpr const char* kReportSchema = "sizelab-report/1";

struct report_options {
  bool json = false;
  bool trace = false;
};

std::string render_verdict(const rewrite_problem& p, const verdict& v,
                           const report_options& opts, double seconds);

struct label_report {
  quasi_model_report qm;
  std::vector<labelled_rule> rules;
  pt_result pt;
  bool ran_pt = false;
};

std::string render_label_report(const rewrite_problem& p, const label_report& r,
                                const report_options& opts, double seconds);

}  // namespace sizelab
