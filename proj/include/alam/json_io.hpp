#pragma once

#include <json.hpp>

#include "alam/confluence.hpp"
#include "alam/print.hpp"
#include "alam/rules.hpp"
#include "alam/search.hpp"
#include "alam/translate.hpp"

namespace alam {

using json = nlohmann::ordered_json;

// Terms are embedded as surface syntax so that any term in structured output
// re-parses (to an alpha-equal term, since printing is name-preserving).
inline auto term_json(const TermPtr& t) -> json {
  return to_string(t);
}

inline auto step_json(const StepRecord& s) -> json {
  json j;
  j["rule"] = rule_name_str(s.rule);
  j["position"] = s.position;
  j["reversed"] = s.reversed;
  j["term"] = term_json(s.result);
  if (s.alternatives >= 0) j["alternatives"] = s.alternatives;
  return j;
}

inline auto trace_json(const ReductionTrace& t) -> json {
  json steps = json::array();
  for (const auto& s : t.steps) steps.push_back(step_json(s));
  return json{{"start", term_json(t.start)}, {"steps", std::move(steps)}};
}

inline auto simulation_json(const SimulationReport& r) -> json {
  json j;
  j["source"] = term_json(r.source);
  j["source_value"] = term_json(r.source_value);
  j["translated"] = term_json(r.translated);
  j["target_trace"] = trace_json(r.target_trace);
  j["encoded_value"] = term_json(r.encoded_value);
  j["ok"] = r.ok;
  if (r.indifference_ok) j["indifference_ok"] = *r.indifference_ok;
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

inline auto join_json(const JoinResult& r) -> json {
  json j;
  j["joined"] = r.joined;
  j["depth_used"] = r.depth_used;
  if (r.joined) j["meet"] = term_json(r.meet);
  if (r.left_trace) j["left_trace"] = trace_json(*r.left_trace);
  if (r.right_trace) j["right_trace"] = trace_json(*r.right_trace);
  return j;
}

inline auto peak_json(const TermPtr& peak, const PeakFailure& f) -> json {
  json j;
  j["peak"] = term_json(peak);
  j["left"] = step_json(f.left);
  j["right"] = step_json(f.right);
  return j;
}

inline auto eq_to_red_json(const EqToRedReport& r) -> json {
  json j;
  j["ok"] = r.ok;
  j["value_found"] = r.value_found;
  if (r.value) j["value"] = term_json(r.value);
  if (r.symmetric_trace) j["symmetric_trace"] = trace_json(*r.symmetric_trace);
  j["oriented_value_found"] = r.oriented_value_found;
  if (r.oriented_value) j["oriented_value"] = term_json(r.oriented_value);
  if (r.oriented_trace) j["oriented_trace"] = trace_json(*r.oriented_trace);
  j["values_related"] = r.values_related;
  if (r.relation_trace) j["relation_trace"] = trace_json(*r.relation_trace);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline auto colon_lemmas_json(const ColonLemmasReport& r) -> json {
  json j;
  j["translation_reaches_colon"] = r.translation_reaches_colon;
  j["steps_preserved"] = r.steps_preserved;
  if (r.value_encoding) j["value_encoding"] = *r.value_encoding;
  return j;
}

}  // namespace alam
