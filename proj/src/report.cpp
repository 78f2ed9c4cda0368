#include "sizelab/report.hpp"

#include <sstream>

#include "json.hpp"

namespace sizelab {

namespace {

nlohmann::json call_json(const cc_call& c) {
  nlohmann::json j;
  j["callee"] = c.callee;
  j["call"] = c.call_text;
  nlohmann::json b = nlohmann::json::array(), zb = nlohmann::json::array(),
                 za = nlohmann::json::array();
  for (const auto& e : c.measured_sizes) b.push_back(to_string(e));
  for (const auto& e : c.zeta_b) zb.push_back(to_string(e));
  for (const auto& e : c.zeta_a) za.push_back(to_string(e));
  j["sizes"] = b;
  j["zeta_call"] = zb;
  j["zeta_lhs"] = za;
  j["decreasing"] = c.decreasing;
  return j;
}

nlohmann::json trace_json(const rule_trace& t) {
  nlohmann::json j;
  j["rule"] = t.rule_id;
  j["symbol"] = t.fun;
  j["lhs"] = t.lhs_text;
  j["rhs"] = t.rhs_text;
  j["env"] = t.env_text;
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : t.arg_sizes) a.push_back(to_string(e));
  j["arg_sizes"] = a;
  if (t.rhs_size) j["rhs_size"] = to_string(t.rhs_size);
  if (t.bound) j["bound"] = to_string(t.bound);
  j["comparison"] = to_string(t.comparison);
  j["ok"] = t.ok;
  if (!t.ok) {
    j["error"] = t.error_code;
    j["message"] = t.error_message;
  }
  nlohmann::json calls = nlohmann::json::array();
  for (const auto& c : t.calls) calls.push_back(call_json(c));
  j["calls"] = calls;
  return j;
}

std::string tuple_text(const std::vector<size_ptr>& es) {
  std::string s = "(";
  for (size_t i = 0; i < es.size(); ++i) {
    if (i) s += ", ";
    s += to_string(es[i]);
  }
  return s + ")";
}

}  // namespace

std::string render_verdict(const rewrite_problem& p, const verdict& v,
                           const report_options& opts, double seconds) {
  if (opts.json) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["problem"] = p.name;
    j["verdict"] = to_string(v.status);
    j["seconds"] = seconds;
    if (!v.reject_code.empty()) {
      j["error"] = v.reject_code;
      j["message"] = v.reject_message;
    }
    nlohmann::json notes = nlohmann::json::array();
    for (const auto& n : v.notes) notes.push_back(n);
    j["notes"] = notes;
    nlohmann::json traces = nlohmann::json::array();
    for (const auto& t : v.traces) traces.push_back(trace_json(t));
    j["rules"] = traces;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << to_string(v.status);
  if (!p.name.empty()) os << "  (" << p.name << ")";
  os << "\n";
  if (!v.reject_code.empty())
    os << "  " << v.reject_code << ": " << v.reject_message << "\n";
  for (const auto& n : v.notes) os << "  note: " << n << "\n";
  if (opts.trace || v.status != verdict_status::terminates) {
    for (const auto& t : v.traces) {
      os << "  rule " << t.rule_id << ": " << t.lhs_text << " -> " << t.rhs_text << "\n";
      if (!t.fun.empty()) {
        os << "    a = " << tuple_text(t.arg_sizes);
        if (t.rhs_size) os << ", rhs size " << to_string(t.rhs_size);
        if (t.bound)
          os << ", bound " << to_string(t.bound) << " [" << to_string(t.comparison) << "]";
        os << "\n";
      }
      for (const auto& c : t.calls) {
        os << "    call " << c.call_text << ": " << tuple_text(c.zeta_b)
           << (c.decreasing ? " <_A " : " not < ") << tuple_text(c.zeta_a) << "\n";
      }
      if (!t.ok) os << "    " << t.error_code << ": " << t.error_message << "\n";
    }
  }
  os << "  time: " << seconds << "s\n";
  return os.str();
}

std::string render_label_report(const rewrite_problem& p, const label_report& r,
                                const report_options& opts, double seconds) {
  if (opts.json) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["problem"] = p.name;
    j["quasi_model"] = r.qm.ok;
    if (!r.qm.ok) {
      j["error"] = r.qm.code;
      j["message"] = r.qm.message;
    }
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : r.qm.entries) {
      nlohmann::json je;
      je["rule"] = e.rule_id;
      je["justification"] = e.justification;
      if (e.lhs_size) {
        je["lhs_size"] = to_string(e.lhs_size);
        je["rhs_size"] = to_string(e.rhs_size);
        je["comparison"] = to_string(e.comparison);
      }
      entries.push_back(je);
    }
    j["quasi_model_entries"] = entries;
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& lr : r.rules)
      rules.push_back(to_string(lr.lhs) + " -> " + to_string(lr.rhs));
    j["labelled_rules"] = rules;
    if (r.ran_pt) {
      j["precedence_terminating"] = r.pt.ok;
      if (!r.pt.ok) j["witness"] = r.pt.witness;
    }
    j["seconds"] = seconds;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  if (!r.qm.ok) {
    os << "quasi-model check failed: " << r.qm.message << "\n";
    return os.str();
  }
  os << "quasi-model: ok (" << r.qm.entries.size() << " rules)\n";
  if (opts.trace)
    for (const auto& e : r.qm.entries) {
      os << "  rule " << e.rule_id << ": ";
      if (e.lhs_size)
        os << "sigma(l) = " << to_string(e.lhs_size) << ", sigma(r) = " << to_string(e.rhs_size)
           << " [" << to_string(e.comparison) << "]";
      else
        os << "fixpoint interpretation";
      os << "\n";
    }
  os << "labelled rules:\n";
  for (const auto& lr : r.rules)
    os << "  " << to_string(lr.lhs) << " -> " << to_string(lr.rhs) << "\n";
  if (r.ran_pt) {
    os << "precedence termination: " << (r.pt.ok ? "yes" : "NO") << "\n";
    if (!r.pt.ok) os << "  witness: " << r.pt.witness << "\n";
  }
  os << "time: " << seconds << "s\n";
  return os.str();
}

}  // namespace sizelab
