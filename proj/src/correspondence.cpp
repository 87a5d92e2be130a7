#include <map>
#include <utility>

#include "fcl/conslaw.hpp"

namespace fcl {

namespace {

using S = SymmetryId;
// Each cell lists vector numbers; an empty list is the trivial (zero) entry.
using Row = std::vector<int>;
using Table = std::map<std::pair<S, int>, Row>;

const Table& rl_wave() {
  static const Table t = {
      {{S::X1, 1}, {}},       {{S::X1, 2}, {1}},      {{S::X1, 3}, {}},       {{S::X1, 4}, {2}},
      {{S::X2, 1}, {1}},      {{S::X2, 2}, {3}},      {{S::X2, 3}, {2}},      {{S::X2, 4}, {4}},
      {{S::X3_pow, 1}, {1}},  {{S::X3_pow, 2}, {3}},  {{S::X3_pow, 3}, {2}},  {{S::X3_pow, 4}, {4}},
      {{S::X4_pow43, 1}, {3}}, {{S::X4_pow43, 2}, {}}, {{S::X4_pow43, 3}, {4}}, {{S::X4_pow43, 4}, {}},
      {{S::X4_rl, 1}, {2}},   {{S::X4_rl, 2}, {4}},   {{S::X4_rl, 3}, {5}},   {{S::X4_rl, 4}, {6}},
  };
  return t;
}

const Table& caputo_sub() {
  static const Table t = {
      {{S::X1, 1}, {}},          {{S::X1, 2}, {1}},         {{S::X2, 1}, {1, 2}},     {{S::X2, 2}, {3, 4}},
      {{S::X3_pow, 1}, {1}},     {{S::X3_pow, 2}, {3}},     {{S::X3_exp, 1}, {1}},    {{S::X3_exp, 2}, {3}},
      {{S::X4_pow43, 1}, {3}},   {{S::X4_pow43, 2}, {}},
  };
  return t;
}

const Table& caputo_wave() {
  static const Table t = {
      {{S::X1, 1}, {}},          {{S::X1, 2}, {}},          {{S::X1, 3}, {2}},         {{S::X1, 4}, {3}},
      {{S::X2, 1}, {1, 2}},      {{S::X2, 2}, {2, 3}},      {{S::X2, 3}, {4, 5}},      {{S::X2, 4}, {5, 6}},
      {{S::X3_pow, 1}, {2}},     {{S::X3_pow, 2}, {3}},     {{S::X3_pow, 3}, {5}},     {{S::X3_pow, 4}, {6}},
      {{S::X3_exp, 1}, {2}},     {{S::X3_exp, 2}, {3}},     {{S::X3_exp, 3}, {5}},     {{S::X3_exp, 4}, {6}},
      {{S::X4_pow43, 1}, {5}},   {{S::X4_pow43, 2}, {6}},   {{S::X4_pow43, 3}, {}},    {{S::X4_pow43, 4}, {}},
      {{S::X4_rl, 1}, {1, 2, 3}}, {{S::X4_rl, 2}, {2, 3}},  {{S::X4_rl, 3}, {4, 5, 6}}, {{S::X4_rl, 4}, {5, 6}},
  };
  return t;
}

Correspondence from_numbers(const Table& t, S s, int c, const std::string& prefix) {
  const auto it = t.find({s, c});
  if (it == t.end()) return {};
  Correspondence out;
  if (it->second.empty()) {
    out.kind = Correspondence::Kind::Zero;
    return out;
  }
  out.kind = Correspondence::Kind::Vectors;
  for (int v : it->second) out.ids.push_back(prefix + std::to_string(v));
  return out;
}

Correspondence named(std::vector<std::string> ids) {
  Correspondence out;
  out.kind = ids.empty() ? Correspondence::Kind::Zero : Correspondence::Kind::Vectors;
  out.ids = std::move(ids);
  return out;
}

// Subdiffusion with the RL derivative is described in prose rather than a table.
Correspondence rl_sub(S s, int c) {
  if (c != 1 && c != 2) return {};
  switch (s) {
    case S::X1: return c == 1 ? named({}) : named({"Trivial_RL"});
    case S::X2:
    case S::X3_pow: return c == 1 ? named({"Trivial_RL"}) : named({"NL_RL_sub"});
    case S::X4_pow43: return c == 1 ? named({"NL_RL_sub"}) : named({});
    case S::X4_rl: return c == 1 ? named({"NL_RL_sub_t1"}) : named({"NL_RL_sub_t2"});
    default: return {};
  }
}

}  // namespace

Correspondence correspondence(SymmetryId s, int constant, AdjointRegime regime, bool conditional) {
  switch (regime) {
    case AdjointRegime::RL_sub: return rl_sub(s, constant);
    case AdjointRegime::RL_wave: return from_numbers(rl_wave(), s, constant, "Table1_v");
    case AdjointRegime::Caputo_sub: return from_numbers(caputo_sub(), s, constant, "Table3_v");
    case AdjointRegime::Caputo_wave:
      if (s == S::X4_rl && !conditional) return {};
      return from_numbers(caputo_wave(), s, constant, "Table5_v");
    case AdjointRegime::Linear_particular: return {};
  }
  return {};
}

std::vector<SymmetryId> correspondence_columns(AdjointRegime regime, bool conditional) {
  switch (regime) {
    case AdjointRegime::RL_sub:
    case AdjointRegime::RL_wave: return {S::X1, S::X2, S::X3_pow, S::X4_pow43, S::X4_rl};
    case AdjointRegime::Caputo_sub: return {S::X1, S::X2, S::X3_pow, S::X3_exp, S::X4_pow43};
    case AdjointRegime::Caputo_wave:
      if (conditional) return {S::X1, S::X2, S::X3_pow, S::X3_exp, S::X4_pow43, S::X4_rl};
      return {S::X1, S::X2, S::X3_pow, S::X3_exp, S::X4_pow43};
    case AdjointRegime::Linear_particular: return {};
  }
  return {};
}

}  // namespace fcl
