#include "tai/moment_order.hpp"

#include <algorithm>
#include <deque>

namespace tai {

MomentOrder::MomentOrder(std::span<const Formula> facts) {
  for (const Formula& f : facts) {
    if (!f.is(FormulaKind::Atom)) continue;
    const Term& a = f.atom_term();
    if (a.is_application() && a.name() == sym::prior && a.ground())
      edges_.emplace_back(a.args()[0], a.args()[1]);
  }
}

bool MomentOrder::less(const Term& a, const Term& b) const {
  if (a.integer_value() && b.integer_value())
    return *a.integer_value() < *b.integer_value();
  return reachable(a, b, true);
}

bool MomentOrder::less_equal(const Term& a, const Term& b) const {
  if (a == b) return true;
  if (a.integer_value() && b.integer_value())
    return *a.integer_value() <= *b.integer_value();
  return reachable(a, b, false);
}

bool MomentOrder::reachable(const Term& from, const Term& to,
                            bool strict) const {
  std::vector<Term> nodes;
  auto note = [&](const Term& t) {
    for (Term cur = t;;) {
      if (std::find(nodes.begin(), nodes.end(), cur) == nodes.end())
        nodes.push_back(cur);
      if (cur.is_application() && cur.name() == sym::next)
        cur = cur.args()[0];
      else
        break;
    }
  };
  note(from);
  note(to);
  for (const auto& [x, y] : edges_) {
    note(x);
    note(y);
  }

  auto is_next_of = [](const Term& v, const Term& u) {
    return v.is_application() && v.name() == sym::next && v.args()[0] == u;
  };

  // Direct successors of u: (v, u < v strictly).
  auto step = [&](const Term& u, std::vector<std::pair<Term, bool>>& out) {
    for (const auto& [x, y] : edges_)
      if (x == u) out.emplace_back(y, true);
    for (const Term& v : nodes) {
      if (u.integer_value() && v.integer_value() &&
          *v.integer_value() > *u.integer_value())
        out.emplace_back(v, true);
      if (is_next_of(v, u)) out.emplace_back(v, true);
    }
  };

  struct State {
    Term t;
    bool strict;
  };
  std::deque<State> queue{{from, false}};
  std::vector<std::pair<Term, bool>> seen{{from, false}};
  while (!queue.empty()) {
    State s = queue.front();
    queue.pop_front();
    std::vector<std::pair<Term, bool>> succ;
    step(s.t, succ);
    if (s.t.is_application() && s.t.name() == sym::next) {
      // next(c) <= v whenever c < v.
      std::vector<std::pair<Term, bool>> inner;
      step(s.t.args()[0], inner);
      for (auto& [v, st] : inner)
        if (st && !(v == s.t)) succ.emplace_back(v, false);
    }
    for (auto& [v, st] : succ) {
      bool ns = s.strict || st;
      if (v == to && (ns || !strict)) return true;
      bool dup = std::any_of(seen.begin(), seen.end(), [&](const auto& p) {
        return p.first == v && (p.second || !ns);
      });
      if (dup) continue;
      seen.emplace_back(v, ns);
      queue.push_back({v, ns});
    }
  }
  return false;
}

}  // namespace tai
