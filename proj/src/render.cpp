// Copyright 2026 The Wigner Simulator Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wigner/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "wigner/dsl.hpp"

namespace wigner {

namespace {

using nlohmann::json;

std::string format_g(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string joined(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string tuple_text(const std::vector<std::string>& labels) {
  return "(" + joined(labels, ",") + ")";
}

std::string padded(const std::string& text, std::size_t width) {
  return text + std::string(width > text.size() ? width - text.size() : 1, ' ');
}

/// Column width for left-aligned tables: widest cell plus a two-space gutter.
std::size_t column_width(const std::vector<std::string>& cells, std::size_t header) {
  std::size_t w = header;
  for (const auto& c : cells) w = std::max(w, c.size());
  return w + 2;
}

std::string record_text(const std::map<std::string, std::string>& record) {
  if (record.empty()) return "-";
  std::string out;
  for (const auto& [step, label] : record) {
    if (!out.empty()) out += ", ";
    out += step + "=" + label;
  }
  return out;
}

std::string assignment_text(const Assignment& a) { return a.variable + "=" + a.label; }

std::string assignments_text(const std::vector<Assignment>& list) {
  std::string out;
  for (const auto& a : list) {
    if (!out.empty()) out += ", ";
    out += assignment_text(a);
  }
  return out;
}

json to_json(const Distribution& d) {
  json probs = json::object();
  for (const auto& [labels, p] : d.support()) {
    probs[joined(labels, ",")] = p;
  }
  return json{{"variables", d.variables()}, {"probabilities", probs}};
}

json to_json(const Assignment& a) {
  return json{{"variable", a.variable}, {"label", a.label}};
}

json to_json(const ValuationResult& r) {
  json witness = json::array();
  for (const auto& a : r.witness) witness.push_back(to_json(a));
  json trace = json::array();
  for (const auto& step : r.trace) {
    json s;
    switch (step.kind) {
      case DeductionKind::Forced:
        s["kind"] = "forced";
        break;
      case DeductionKind::Violation:
        s["kind"] = "violation";
        break;
      case DeductionKind::Exhausted:
        s["kind"] = "exhausted";
        break;
    }
    s["text"] = step.text;
    s["assigned"] = step.assigned.has_value() ? to_json(*step.assigned) : json();
    s["constraint_index"] =
        step.constraint_index.has_value() ? json(*step.constraint_index) : json();
    trace.push_back(std::move(s));
  }
  return json{{"sat", r.sat}, {"witness", witness}, {"trace", trace}};
}

json to_json(const PossibilisticConstraint& c) {
  return json{{"frame", c.frame},
              {"atom", joined(c.atoms, ",")},
              {"impossible", c.impossible},
              {"probability", c.probability}};
}

json frames_json(const std::vector<Frame>& frames) {
  json out = json::array();
  for (const auto& f : frames) {
    json atoms = json::array();
    for (const auto& [label, proj] : f.atoms) atoms.push_back(label);
    out.push_back(json{{"name", f.name}, {"atoms", atoms}});
  }
  return out;
}

void append_valuation_text(std::ostringstream& out, const ValuationResult& r) {
  if (r.sat) {
    out << "status: SAT\n";
    out << "witness: " << assignments_text(r.witness) << "\n";
    return;
  }
  out << "status: UNSAT\n";
  out << "trace:\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    out << "  " << (i + 1) << ". " << r.trace[i].text << "\n";
  }
}

void append_modalities_text(std::ostringstream& out,
                            const std::vector<PossibilisticConstraint>& constraints) {
  std::vector<std::string> frame_cells;
  std::vector<std::string> atom_cells;
  std::vector<std::string> prob_cells;
  for (const auto& c : constraints) {
    frame_cells.push_back(c.frame);
    atom_cells.push_back(tuple_text(c.atoms));
    prob_cells.push_back(format_probability(c.probability));
  }
  const std::size_t wf = column_width(frame_cells, 5);
  const std::size_t wa = column_width(atom_cells, 4);
  const std::size_t wp = column_width(prob_cells, 11);
  out << "  " << padded("frame", wf) << padded("atom", wa) << padded("probability", wp)
      << "modality\n";
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    out << "  " << padded(frame_cells[i], wf) << padded(atom_cells[i], wa)
        << padded(prob_cells[i], wp)
        << (constraints[i].impossible ? "impossible" : "possible") << "\n";
  }
}

}  // namespace

std::string format_probability(double p, double zero_tol) {
  if (std::abs(p) < zero_tol) return "0";
  return format_g(p);
}

std::string render(const Distribution& d, Format format, double zero_tol) {
  if (format == Format::Json) {
    return to_json(d).dump(2) + "\n";
  }
  std::vector<std::string> tuples;
  std::vector<std::string> probs;
  for (const auto& [labels, p] : d.support()) {
    tuples.push_back(tuple_text(labels));
    probs.push_back(format_probability(p, zero_tol));
  }
  const std::string header = tuple_text(d.variables());
  const std::size_t w = column_width(tuples, header.size());
  std::ostringstream out;
  out << padded(header, w) << "probability\n";
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    out << padded(tuples[i], w) << probs[i] << "\n";
  }
  return out.str();
}

std::string render(const BranchEnsemble& e, Format format) {
  if (format == Format::Json) {
    json branches = json::array();
    for (std::size_t i = 0; i < e.branches.size(); ++i) {
      const Branch& b = e.branches[i];
      branches.push_back(json{{"index", i + 1},
                              {"probability", b.probability},
                              {"record", b.record},
                              {"state", ket_expression(b.state, 6)}});
    }
    return json{{"branches", branches}, {"total_probability", e.total_probability()}}.dump(2) +
           "\n";
  }
  std::vector<std::string> indices;
  std::vector<std::string> probs;
  std::vector<std::string> records;
  for (std::size_t i = 0; i < e.branches.size(); ++i) {
    indices.push_back(std::to_string(i + 1));
    probs.push_back(format_g(e.branches[i].probability));
    records.push_back(record_text(e.branches[i].record));
  }
  const std::size_t wi = column_width(indices, 6);
  const std::size_t wp = column_width(probs, 11);
  const std::size_t wr = column_width(records, 6);
  std::ostringstream out;
  out << padded("branch", wi) << padded("probability", wp) << padded("record", wr) << "state\n";
  for (std::size_t i = 0; i < e.branches.size(); ++i) {
    out << padded(indices[i], wi) << padded(probs[i], wp) << padded(records[i], wr)
        << ket_expression(e.branches[i].state, 6) << "\n";
  }
  out << "total probability: " << format_g(e.total_probability()) << "\n";
  return out.str();
}

std::string render(const NoSignalingReport& r, Format format, double tol) {
  if (format == Format::Json) {
    json entries = json::array();
    for (const auto& entry : r.entries) {
      entries.push_back(json{{"marginal", entry.side1_observable},
                             {"against", entry.side2_observable},
                             {"deviation", entry.max_deviation}});
    }
    return json{{"passes", r.passes(tol)},
                {"tolerance", tol},
                {"max_deviation", r.max_deviation},
                {"entries", entries}}
               .dump(2) +
           "\n";
  }
  std::vector<std::string> left;
  std::vector<std::string> right;
  for (const auto& entry : r.entries) {
    left.push_back(entry.side1_observable);
    right.push_back(entry.side2_observable);
  }
  const std::size_t wl = column_width(left, 8);
  const std::size_t wr = column_width(right, 7);
  std::ostringstream out;
  out << "no-signaling audit: " << (r.passes(tol) ? "PASS" : "FAIL") << " (max deviation "
      << format_g(r.max_deviation) << ", tolerance " << format_g(tol) << ")\n";
  out << padded("marginal", wl) << padded("against", wr) << "deviation\n";
  for (const auto& entry : r.entries) {
    out << padded(entry.side1_observable, wl) << padded(entry.side2_observable, wr)
        << format_g(entry.max_deviation) << "\n";
  }
  return out.str();
}

std::string render(const ValuationResult& r, Format format) {
  if (format == Format::Json) {
    return to_json(r).dump(2) + "\n";
  }
  std::ostringstream out;
  append_valuation_text(out, r);
  return out.str();
}

std::string render(const ContradictionReport& r, Format format) {
  if (format == Format::Json) {
    json tables = json::object();
    for (const auto& [name, dist] : r.tables) tables[name] = to_json(dist);
    json constraints = json::array();
    for (const auto& c : r.constraints) constraints.push_back(to_json(c));
    json forbidden = json::array();
    for (const auto& combo : r.problem.forbidden) {
      json clauses = json::array();
      for (const auto& a : combo.clauses) clauses.push_back(to_json(a));
      forbidden.push_back(std::move(clauses));
    }
    json required = json::array();
    for (const auto& a : r.problem.required) required.push_back(to_json(a));
    return json{{"tables", tables},
                {"frames", frames_json(r.frames)},
                {"constraints", constraints},
                {"forbidden", forbidden},
                {"required", required},
                {"result", to_json(r.result)}}
               .dump(2) +
           "\n";
  }

  std::ostringstream out;
  out << "joint tables:\n\n";
  for (const auto& [name, dist] : r.tables) {
    out << render(dist, Format::Text) << "\n";
  }
  out << "impossible outcomes:\n";
  bool any = false;
  for (const auto& c : r.constraints) {
    if (!c.impossible) continue;
    out << "  " << c.frame << " " << tuple_text(c.atoms) << "\n";
    any = true;
  }
  if (!any) out << "  (none)\n";
  out << "\nforbidden combinations:\n";
  if (r.problem.forbidden.empty()) out << "  (none)\n";
  for (const auto& combo : r.problem.forbidden) {
    out << "  {" << assignments_text(combo.clauses) << "}\n";
  }
  if (!r.problem.required.empty()) {
    out << "\nrequired: " << assignments_text(r.problem.required) << "\n";
  }
  out << "\n";
  append_valuation_text(out, r.result);
  return out.str();
}

std::string render(const FramesReport& r, Format format) {
  if (format == Format::Json) {
    json constraints = json::array();
    for (const auto& c : r.constraints) constraints.push_back(to_json(c));
    json pairs = json::array();
    for (const auto& pair : r.intertwinements) {
      json shared = json::array();
      for (const auto& elem : pair.shared) {
        shared.push_back(json{{"atoms1", elem.atoms1}, {"atoms2", elem.atoms2}});
      }
      pairs.push_back(
          json{{"frame1", pair.frame1}, {"frame2", pair.frame2}, {"shared", shared}});
    }
    return json{{"frames", frames_json(r.frames)},
                {"constraints", constraints},
                {"intertwinements", pairs}}
               .dump(2) +
           "\n";
  }

  std::ostringstream out;
  out << "frames:\n";
  for (const auto& f : r.frames) {
    std::vector<std::string> atoms;
    for (const auto& [label, proj] : f.atoms) atoms.push_back("(" + label + ")");
    out << "  " << f.name << ": atoms " << joined(atoms, ", ") << "\n";
  }
  out << "\nmodalities:\n";
  append_modalities_text(out, r.constraints);
  out << "\nintertwinements:\n";
  if (r.intertwinements.empty()) out << "  (none)\n";
  for (const auto& pair : r.intertwinements) {
    out << "  " << pair.frame1 << " ~ " << pair.frame2 << ": ";
    if (pair.shared.empty()) {
      out << "no shared elements\n";
      continue;
    }
    out << pair.shared.size() << (pair.shared.size() == 1 ? " shared element\n"
                                                          : " shared elements\n");
    for (const auto& elem : pair.shared) {
      std::vector<std::string> a1;
      std::vector<std::string> a2;
      for (const auto& label : elem.atoms1) a1.push_back("(" + label + ")");
      for (const auto& label : elem.atoms2) a2.push_back("(" + label + ")");
      out << "    {" << joined(a1, ", ") << "} = {" << joined(a2, ", ") << "}\n";
    }
  }
  return out.str();
}

}  // namespace wigner
