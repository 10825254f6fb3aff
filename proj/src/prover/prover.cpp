#include "tai/prover/prover.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "tai/moment_order.hpp"

namespace tai::prover {

const char* to_string(Exhausted e) {
  switch (e) {
    case Exhausted::None: return "none";
    case Exhausted::Depth: return "depth";
    case Exhausted::Size: return "size";
    case Exhausted::Candidates: return "candidates";
    case Exhausted::Steps: return "steps";
  }
  return "none";
}

namespace {

using Env = std::vector<std::pair<std::string, std::string>>;

Term resolve(const Term& t, const Substitution& th) {
  if (th.empty() || t.ground()) return t;
  return substitute(t, th);
}

Formula resolve(const Formula& f, const Substitution& th) {
  if (th.empty() || !f.has_metavariables()) return f;
  return substitute(f, th);
}

void term_metas(const Term& t, std::vector<Term>& out) {
  if (t.null() || t.ground()) return;
  if (t.is_variable()) {
    if (t.is_meta() && std::find(out.begin(), out.end(), t) == out.end())
      out.push_back(t);
    return;
  }
  for (const Term& a : t.args()) term_metas(a, out);
}

bool mentions_bound(const Term& t, const Env& env) {
  if (t.ground()) return false;
  if (t.is_variable()) {
    if (t.is_meta()) return false;
    for (const auto& [l, r] : env)
      if (l == t.name() || r == t.name()) return true;
    return false;
  }
  for (const Term& a : t.args())
    if (mentions_bound(a, env)) return true;
  return false;
}

std::string head_key(const Formula& f) {
  if (f.is(FormulaKind::Atom)) {
    const Term& a = f.atom_term();
    return a.is_variable() ? "?" : a.name();
  }
  return "#" + std::to_string(static_cast<int>(f.kind()));
}

const std::string kFalseKey = "#" + std::to_string(static_cast<int>(FormulaKind::False));

// Can peeling f (through forall, ->, and, K, not) produce something with `key`?
bool reaches(const Formula& f, const std::string& key) {
  std::string h = head_key(f);
  if (h == key || (h == "?" && key[0] != '#')) return true;
  switch (f.kind()) {
    case FormulaKind::ForAll:
    case FormulaKind::Knows:
      return reaches(f.body(), key);
    case FormulaKind::Implies:
      return reaches(f.rhs(), key);
    case FormulaKind::And:
      return std::any_of(f.subs().begin(), f.subs().end(),
                         [&](const Formula& s) { return reaches(s, key); });
    case FormulaKind::Not:
      return key == kFalseKey;
    default:
      return false;
  }
}

Proof leaf(const Formula& f, int label) {
  ProofNode n;
  n.conclusion = f;
  n.rule = Rule::Hyp;
  n.hyp_label = label;
  return make_node(std::move(n));
}

struct Hyp {
  Formula f;
  int label;  // -1: member of the premise set
  Proof proof;
};

struct MemoKey {
  long ctx;
  Formula f;
  friend bool operator==(const MemoKey& a, const MemoKey& b) {
    return a.ctx == b.ctx && a.f == b.f;
  }
};
struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    return hash_combine(std::hash<long>{}(k.ctx), k.f.hash());
  }
};

constexpr int kForever = 1 << 20;
constexpr int kMaxSplits = 2;

struct Step {
  enum Kind { ForallE, ImpE, AndE, I4, NotE } kind;
  Term term;         // ForallE instance (a metavariable)
  Formula after;     // conclusion after this step
  Formula subgoal;   // ImpE antecedent / NotE refuted formula
};

class Search {
 public:
  using Cont = std::function<bool(const Substitution&, const Proof&)>;
  // Called on each formula reachable by peeling; may finish the path.
  using Matcher = std::function<bool(const Formula& cur, const Substitution& th,
                                     std::vector<Step>& steps, const Hyp& h)>;

  Search(const Signature& sig, std::span<const Formula> gamma, const Budget& b)
      : sig_(sig), budget_(b), order_(gamma) {
    for (const Formula& g : gamma) {
      hyps_.push_back(Hyp{g, -1, leaf(g, -1)});
      split_used_.push_back(false);
      add_universe(g);
    }
    gamma_ = {gamma.begin(), gamma.end()};
    for (const auto& [name, sort] : sig.user_constants()) {
      Term c = Term::constant(name, sort);
      if (std::find(universe_.begin(), universe_.end(), c) == universe_.end())
        universe_.push_back(c);
    }
  }

  void add_universe(const Formula& f) {
    std::vector<Term> ts;
    collect_ground_terms(f, ts);
    for (const Term& t : ts)
      if (std::find(universe_.begin(), universe_.end(), t) == universe_.end())
        universe_.push_back(t);
  }

  Proof run(const Formula& goal) {
    add_universe(goal);
    int step = std::max(2, budget_.max_depth / 4);
    for (int d = std::min(step, budget_.max_depth);; d = std::min(d + step, budget_.max_depth)) {
      depth_hit_ = false;
      Proof p = solve_ground(goal, d);
      if (p) {
        if (p->rule == Rule::Hyp) {
          ProofNode r;
          r.conclusion = p->conclusion;
          r.rule = Rule::Reiteration;
          r.premises = {p};
          p = make_node(std::move(r));
        }
        return p;
      }
      if (aborted_ || !depth_hit_ || d >= budget_.max_depth) break;
    }
    return nullptr;
  }

  Exhausted exhausted() const {
    if (aborted_) return Exhausted::Steps;
    if (depth_hit_) return Exhausted::Depth;
    if (size_hit_) return Exhausted::Size;
    if (cand_hit_) return Exhausted::Candidates;
    return Exhausted::None;
  }
  long steps() const { return steps_; }

 private:
  // ---- substitutions -------------------------------------------------------

  bool bind(Substitution& th, const Term& m, const Term& t) {
    if (t.occurs(m)) return false;
    Substitution one{{m.name(), t}};
    for (auto& [_, v] : th) v = substitute(v, one);
    th[m.name()] = t;
    return true;
  }

  bool unify(Term a, Term b, Substitution& th, const Env& env) {
    a = resolve(a, th);
    b = resolve(b, th);
    bool am = a.is_variable() && a.is_meta();
    bool bm = b.is_variable() && b.is_meta();
    if (am && bm) {
      if (a.name() == b.name()) return true;
      if (sig_.is_subsort(b.sort(), a.sort())) return bind(th, a, b);
      if (sig_.is_subsort(a.sort(), b.sort())) return bind(th, b, a);
      return false;
    }
    if (am || bm) {
      const Term& m = am ? a : b;
      const Term& v = am ? b : a;
      if (!sig_.is_subsort(v.sort(), m.sort()) || mentions_bound(v, env))
        return false;
      return bind(th, m, v);
    }
    if (a.is_variable() || b.is_variable()) {
      if (!(a.is_variable() && b.is_variable())) return false;
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        bool l = it->first == a.name();
        bool r = it->second == b.name();
        if (l || r) return l && r;
      }
      return a.name() == b.name();
    }
    auto is_next = [](const Term& t) {
      return t.is_application() && t.name() == sym::next;
    };
    if (is_next(a) && b.integer_value())
      return *b.integer_value() > 0 &&
             unify(a.args()[0], Term::integer(*b.integer_value() - 1), th, env);
    if (is_next(b) && a.integer_value())
      return *a.integer_value() > 0 &&
             unify(Term::integer(*a.integer_value() - 1), b.args()[0], th, env);
    if (a.kind() != b.kind()) return false;
    if (a.is_constant()) return a == b;
    if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
      if (!unify(a.args()[i], b.args()[i], th, env)) return false;
    return true;
  }

  bool unify(const Formula& p, const Formula& g, Substitution& th, Env& env) {
    if (p.kind() != g.kind()) return false;
    switch (p.kind()) {
      case FormulaKind::Atom:
        return unify(p.atom_term(), g.atom_term(), th, env);
      case FormulaKind::False:
        return true;
      case FormulaKind::ForAll:
      case FormulaKind::Exists: {
        if (p.var().sort() != g.var().sort()) return false;
        env.emplace_back(p.var().name(), g.var().name());
        bool r = unify(p.body(), g.body(), th, env);
        env.pop_back();
        return r;
      }
      default:
        if (p.is(FormulaKind::Ought) && p.flavor() != g.flavor()) return false;
        if (p.args().size() != g.args().size() ||
            p.subs().size() != g.subs().size())
          return false;
        for (std::size_t i = 0; i < p.args().size(); ++i)
          if (!unify(p.args()[i], g.args()[i], th, env)) return false;
        for (std::size_t i = 0; i < p.subs().size(); ++i)
          if (!unify(p.subs()[i], g.subs()[i], th, env)) return false;
        return true;
    }
  }

  bool unify(const Formula& p, const Formula& g, Substitution& th) {
    Env env;
    return unify(p, g, th, env);
  }

  // ---- fresh symbols ------------------------------------------------------

  Term fresh_meta(const Sort& s) {
    return Term::variable("?m" + std::to_string(++meta_counter_), s);
  }

  Term fresh_eigen(const Sort& s) {
    for (;;) {
      std::string name = "_c" + std::to_string(++eigen_counter_);
      bool clash = std::any_of(gamma_.begin(), gamma_.end(), [&](const Formula& g) {
        return formula_contains_constant(g, name);
      });
      if (!clash) return Term::constant(name, s);
    }
  }

  std::vector<Term> candidates(const Sort& s) const {
    std::vector<Term> out;
    for (const Term& t : universe_)
      if (sig_.is_subsort(t.sort(), s)) out.push_back(t);
    return out;
  }

  // Resolve metavariables throughout a proof; leftovers get a default term.
  Proof ground_proof(const Proof& p, Substitution th) {
    Proof r = rebuild(p, th);
    std::vector<Term> left;
    for (const ProofNode* n : post_order(r)) {
      for (const Term& v : n->conclusion.free_variables())
        if (v.is_meta() && std::find(left.begin(), left.end(), v) == left.end())
          left.push_back(v);
      term_metas(n->term, left);
      term_metas(n->time_from, left);
      term_metas(n->time_to, left);
    }
    if (left.empty()) return r;
    for (const Term& m : left) {
      auto cs = candidates(m.sort());
      // An empty universe for the sort: any fresh constant will do.
      bind(th, m, cs.empty() ? fresh_eigen(m.sort()) : cs.front());
    }
    return rebuild(p, th);
  }

  Proof rebuild(const Proof& p, const Substitution& th) {
    std::unordered_map<const ProofNode*, Proof> memo;
    std::function<Proof(const Proof&)> go = [&](const Proof& q) -> Proof {
      if (auto it = memo.find(q.get()); it != memo.end()) return it->second;
      ProofNode n = *q;
      n.conclusion = resolve(n.conclusion, th);
      if (!n.term.null()) n.term = resolve(n.term, th);
      if (!n.time_from.null()) n.time_from = resolve(n.time_from, th);
      if (!n.time_to.null()) n.time_to = resolve(n.time_to, th);
      for (Proof& c : n.premises) c = go(c);
      Proof out = make_node(std::move(n));
      memo.emplace(q.get(), out);
      return out;
    };
    return go(p);
  }

  // ---- context ------------------------------------------------------------

  int push_assumption(const Formula& f) {
    int label = ++label_counter_;
    hyps_.push_back(Hyp{f, label, leaf(f, label)});
    split_used_.push_back(false);
    ctx_stack_.push_back(ctx_);
    ctx_ = ++ctx_counter_;
    return label;
  }

  void pop_assumption() {
    hyps_.pop_back();
    split_used_.pop_back();
    ctx_ = ctx_stack_.back();
    ctx_stack_.pop_back();
  }

  bool tick() {
    if (aborted_) return false;
    if (++steps_ > budget_.max_steps) {
      aborted_ = true;
      return false;
    }
    return true;
  }

  long memo_ctx() const { return (ctx_ * 2 + (raa_used_ ? 1 : 0)) * 4 + splits_; }

  // ---- ground goals -------------------------------------------------------

  Proof solve_ground(const Formula& g, int depth) {
    if (!tick()) return nullptr;
    if (depth <= 0) {
      depth_hit_ = true;
      return nullptr;
    }
    if (static_cast<int>(g.size()) > budget_.max_formula_size) {
      size_hit_ = true;
      return nullptr;
    }
    MemoKey key{memo_ctx(), g};
    if (auto it = success_.find(key); it != success_.end()) return it->second;
    if (auto it = failed_.find(key); it != failed_.end() && it->second >= depth) {
      if (it->second < kForever) depth_hit_ = true;
      return nullptr;
    }
    if (on_path_.count(key)) {
      ++loop_cuts_;
      return nullptr;
    }
    on_path_.insert(key);
    long cuts = loop_cuts_;
    bool depth_before = depth_hit_;
    depth_hit_ = false;
    Proof p = ground_strategies(g, depth);
    bool hit_here = depth_hit_;
    depth_hit_ = depth_before || hit_here;
    on_path_.erase(key);
    if (p) {
      success_.emplace(key, p);
    } else if (loop_cuts_ == cuts && !aborted_) {
      // A failure that never touched the depth bound holds at every depth.
      int& slot = failed_[key];
      slot = std::max(slot, hit_here ? depth : kForever);
    }
    return p;
  }

  Proof ground_strategies(const Formula& g, int depth) {
    for (const Hyp& h : hyps_)
      if (h.f == g) return h.proof;
    for (const Hyp& h : hyps_) {
      if (h.f.is(FormulaKind::False)) {
        ProofNode n;
        n.conclusion = g;
        n.rule = Rule::FalseE;
        n.premises = {h.proof};
        return make_node(std::move(n));
      }
    }

    switch (g.kind()) {
      case FormulaKind::And: {
        // Conjunctions cost no depth: each conjunct is smaller.
        ProofNode n;
        n.conclusion = g;
        n.rule = Rule::AndI;
        for (const Formula& c : g.subs()) {
          Proof p = solve_ground(c, depth);
          if (!p) return nullptr;
          n.premises.push_back(p);
        }
        return make_node(std::move(n));
      }
      case FormulaKind::Implies: {
        int label = push_assumption(g.lhs());
        Proof p = solve_ground(g.rhs(), depth - 1);
        pop_assumption();
        if (!p) return nullptr;
        ProofNode n;
        n.conclusion = g;
        n.rule = Rule::ImpI;
        n.premises = {p};
        n.discharged = {label};
        return make_node(std::move(n));
      }
      case FormulaKind::Not: {
        int label = push_assumption(g.body());
        Proof p = solve_ground(Formula::falsum(), depth - 1);
        pop_assumption();
        if (!p) return nullptr;
        ProofNode n;
        n.conclusion = g;
        n.rule = Rule::NotI;
        n.premises = {p};
        n.discharged = {label};
        return make_node(std::move(n));
      }
      case FormulaKind::ForAll: {
        Term c = fresh_eigen(g.var().sort());
        universe_.push_back(c);
        Proof p = solve_ground(instantiate(g, c), depth - 1);
        universe_.pop_back();
        if (!p) return nullptr;
        ProofNode n;
        n.conclusion = g;
        n.rule = Rule::ForallI;
        n.premises = {p};
        n.term = c;
        return make_node(std::move(n));
      }
      default:
        break;
    }

    if (Proof p = first_solution_extract(g, depth)) return p;

    switch (g.kind()) {
      case FormulaKind::Or:
        for (const Formula& d : g.subs()) {
          if (Proof p = solve_ground(d, depth - 1)) {
            ProofNode n;
            n.conclusion = g;
            n.rule = Rule::OrI;
            n.premises = {p};
            return make_node(std::move(n));
          }
        }
        break;
      case FormulaKind::Exists:
        if (Proof p = exists_intro(g, depth)) return p;
        break;
      case FormulaKind::Knows:
        if (Proof p = intention_rule(g, depth)) return p;
        if (Proof p = attitude_rule(g, depth)) return p;
        break;
      case FormulaKind::Believes:
        if (Proof p = attitude_rule(g, depth)) return p;
        break;
      case FormulaKind::Perceives:
        if (Proof p = perception_rule(g, depth)) return p;
        break;
      default:
        break;
    }
    if (aborted_) return nullptr;

    if (Proof p = case_split(g, depth)) return p;
    if (Proof p = reductio(g, depth)) return p;
    return nullptr;
  }

  Proof first_solution_extract(const Formula& g, int depth) {
    Proof out;
    extract(g, depth, {}, [&](const Substitution& th, const Proof& p) {
      out = ground_proof(p, th);
      return out != nullptr;
    });
    return out;
  }

  // ---- general (possibly non-ground) goals ---------------------------------

  bool solve(const Formula& goal, int depth, const Substitution& th,
             const Cont& k) {
    Formula g = resolve(goal, th);
    if (!g.has_metavariables()) {
      Proof p = solve_ground(g, depth);
      return p && k(th, p);
    }
    if (!tick()) return false;
    if (depth <= 0) {
      depth_hit_ = true;
      return false;
    }
    for (std::size_t i = 0; i < hyps_.size(); ++i) {
      Formula hf = hyps_[i].f;
      Proof hp = hyps_[i].proof;
      Substitution t2 = th;
      if (unify(hf, g, t2) && k(t2, hp)) return true;
      if (aborted_) return false;
    }
    if (extract(g, depth, th, k)) return true;
    switch (g.kind()) {
      case FormulaKind::And:
        return solve_conjuncts(g, 0, depth, th, {}, k);
      case FormulaKind::Or:
        for (const Formula& d : g.subs()) {
          bool r = solve(d, depth - 1, th, [&](const Substitution& t2, const Proof& p) {
            ProofNode n;
            n.conclusion = g;
            n.rule = Rule::OrI;
            n.premises = {p};
            return k(t2, make_node(std::move(n)));
          });
          if (r) return true;
        }
        return false;
      case FormulaKind::Exists: {
        Term w = fresh_meta(g.var().sort());
        return solve(instantiate(g, w), depth - 1, th,
                     [&](const Substitution& t2, const Proof& p) {
                       ProofNode n;
                       n.conclusion = g;
                       n.rule = Rule::ExistsI;
                       n.premises = {p};
                       n.term = w;
                       return k(t2, make_node(std::move(n)));
                     });
      }
      case FormulaKind::Atom:
      case FormulaKind::Intends:
        return false;
      default:
        return enumerate_metas(g, depth, th, k);
    }
  }

  bool solve_conjuncts(const Formula& g, std::size_t i, int depth,
                       const Substitution& th, std::vector<Proof> done,
                       const Cont& k) {
    if (i == g.subs().size()) {
      ProofNode n;
      n.conclusion = g;
      n.rule = Rule::AndI;
      n.premises = std::move(done);
      return k(th, make_node(std::move(n)));
    }
    return solve(g.subs()[i], depth, th, [&](const Substitution& t2, const Proof& p) {
      std::vector<Proof> next = done;
      next.push_back(p);
      return solve_conjuncts(g, i + 1, depth, t2, std::move(next), k);
    });
  }

  // Goals needing assumptions or eigenconstants must be ground: try
  // instantiating their metavariables from the term universe.
  bool enumerate_metas(const Formula& g, int depth, const Substitution& th,
                       const Cont& k) {
    std::vector<Term> metas;
    for (const Term& v : g.free_variables())
      if (v.is_meta()) metas.push_back(v);
    if (metas.empty() || metas.size() > 2) return false;
    int budget = budget_.max_candidates;
    std::function<bool(std::size_t, const Substitution&)> go =
        [&](std::size_t i, const Substitution& t2) -> bool {
      if (i == metas.size()) {
        if (--budget < 0) {
          cand_hit_ = true;
          return false;
        }
        Proof p = solve_ground(resolve(g, t2), depth - 1);
        return p && k(t2, p);
      }
      for (const Term& c : candidates(metas[i].sort())) {
        Substitution t3 = t2;
        if (!bind(t3, metas[i], c)) continue;
        if (go(i + 1, t3)) return true;
        if (budget < 0 || aborted_) return false;
      }
      return false;
    };
    return go(0, th);
  }

  // ---- elimination paths ----------------------------------------------------

  // Peel `cur` depth-first; `m` is offered every formula reached (beyond the
  // hypothesis itself).
  bool walk(const Hyp& h, const Formula& cur, std::vector<Step>& steps,
            const Substitution& th, const std::string& key, const Matcher& m) {
    if (aborted_) return false;
    if (!steps.empty() && m(cur, th, steps, h)) return true;
    switch (cur.kind()) {
      case FormulaKind::ForAll: {
        if (!reaches(cur.body(), key)) return false;
        Term v = fresh_meta(cur.var().sort());
        Formula after = instantiate(cur, v);
        steps.push_back(Step{Step::ForallE, v, after, {}});
        bool r = walk(h, after, steps, th, key, m);
        steps.pop_back();
        return r;
      }
      case FormulaKind::Implies: {
        if (!reaches(cur.rhs(), key)) return false;
        steps.push_back(Step{Step::ImpE, {}, cur.rhs(), cur.lhs()});
        bool r = walk(h, cur.rhs(), steps, th, key, m);
        steps.pop_back();
        return r;
      }
      case FormulaKind::And:
        for (const Formula& s : cur.subs()) {
          if (!reaches(s, key)) continue;
          steps.push_back(Step{Step::AndE, {}, s, {}});
          bool r = walk(h, s, steps, th, key, m);
          steps.pop_back();
          if (r) return true;
        }
        return false;
      case FormulaKind::Knows: {
        if (!reaches(cur.body(), key)) return false;
        steps.push_back(Step{Step::I4, {}, cur.body(), {}});
        bool r = walk(h, cur.body(), steps, th, key, m);
        steps.pop_back();
        return r;
      }
      case FormulaKind::Not:
        if (key != kFalseKey) return false;
        steps.push_back(Step{Step::NotE, {}, Formula::falsum(), cur.body()});
        {
          bool r = m(Formula::falsum(), th, steps, h);
          steps.pop_back();
          return r;
        }
      default:
        return false;
    }
  }

  // Discharge the path's antecedents left to right, then build the chain.
  bool finish(const Hyp& h, const std::vector<Step>& steps, std::size_t i,
              int depth, const Substitution& th, std::vector<Proof>& subs,
              const Cont& k) {
    while (i < steps.size() && steps[i].subgoal.null()) ++i;
    if (i == steps.size()) {
      Proof cur = h.proof;
      std::size_t si = 0;
      for (const Step& s : steps) {
        ProofNode n;
        n.conclusion = s.after;
        n.premises = {cur};
        switch (s.kind) {
          case Step::ForallE: n.rule = Rule::ForallE; n.term = s.term; break;
          case Step::ImpE: n.rule = Rule::ImpE; n.premises.push_back(subs[si++]); break;
          case Step::AndE: n.rule = Rule::AndE; break;
          case Step::I4: n.rule = Rule::I4; break;
          case Step::NotE: n.rule = Rule::NotE; n.premises.push_back(subs[si++]); break;
        }
        cur = make_node(std::move(n));
      }
      return k(th, cur);
    }
    return solve(steps[i].subgoal, depth - 1, th,
                 [&](const Substitution& t2, const Proof& p) {
                   subs.push_back(p);
                   bool r = finish(h, steps, i + 1, depth, t2, subs, k);
                   subs.pop_back();
                   return r;
                 });
  }

  bool extract(const Formula& g, int depth, const Substitution& th,
               const Cont& k) {
    std::string key = head_key(g);
    Matcher m = [&](const Formula& cur, const Substitution& t0,
                    std::vector<Step>& steps, const Hyp& h) {
      Substitution t2 = t0;
      if (!unify(cur, g, t2)) return false;
      std::vector<Proof> subs;
      return finish(h, steps, 0, depth, t2, subs, k);
    };
    // Snapshot: subgoal search may push and pop assumptions.
    std::size_t n = hyps_.size();
    for (std::size_t i = 0; i < n; ++i) {
      Hyp h = hyps_[i];
      if (!reaches(h.f, key)) continue;
      std::vector<Step> steps;
      if (walk(h, h.f, steps, th, key, m)) return true;
      if (aborted_) return false;
    }
    return false;
  }

  // ---- connective rules needing search ------------------------------------

  Proof exists_intro(const Formula& g, int depth) {
    Term w = fresh_meta(g.var().sort());
    Proof out;
    solve(instantiate(g, w), depth - 1, {}, [&](const Substitution& th, const Proof& p) {
      ProofNode n;
      n.conclusion = g;
      n.rule = Rule::ExistsI;
      n.premises = {p};
      n.term = w;
      out = ground_proof(make_node(std::move(n)), th);
      return out != nullptr;
    });
    if (out) return out;
    int left = budget_.max_candidates;
    for (const Term& c : candidates(g.var().sort())) {
      if (--left < 0) {
        cand_hit_ = true;
        break;
      }
      if (Proof p = solve_ground(instantiate(g, c), depth - 1)) {
        ProofNode n;
        n.conclusion = g;
        n.rule = Rule::ExistsI;
        n.premises = {p};
        n.term = c;
        return make_node(std::move(n));
      }
      if (aborted_) break;
    }
    return nullptr;
  }

  Proof case_split(const Formula& g, int depth) {
    if (splits_ >= kMaxSplits) return nullptr;
    for (std::size_t i = 0; i < hyps_.size(); ++i) {
      if (split_used_[i]) continue;
      Hyp h = hyps_[i];
      if (h.f.is(FormulaKind::Or)) {
        split_used_[i] = true;
        ++splits_;
        ProofNode n;
        n.conclusion = g;
        n.rule = Rule::OrE;
        n.premises = {h.proof};
        bool ok = true;
        for (const Formula& d : h.f.subs()) {
          int label = push_assumption(d);
          Proof p = solve_ground(g, depth - 1);
          pop_assumption();
          if (!p) {
            ok = false;
            break;
          }
          n.premises.push_back(p);
          n.discharged.push_back(label);
        }
        split_used_[i] = false;
        --splits_;
        if (ok) return make_node(std::move(n));
      } else if (h.f.is(FormulaKind::Exists)) {
        split_used_[i] = true;
        ++splits_;
        Term c = fresh_eigen(h.f.var().sort());
        universe_.push_back(c);
        int label = push_assumption(instantiate(h.f, c));
        Proof p = solve_ground(g, depth - 1);
        pop_assumption();
        universe_.pop_back();
        split_used_[i] = false;
        --splits_;
        if (p) {
          ProofNode n;
          n.conclusion = g;
          n.rule = Rule::ExistsE;
          n.premises = {h.proof, p};
          n.discharged = {label};
          n.term = c;
          return make_node(std::move(n));
        }
      }
      if (aborted_) return nullptr;
    }
    return nullptr;
  }

  Proof reductio(const Formula& g, int depth) {
    if (raa_used_ || g.is(FormulaKind::False) || g.is(FormulaKind::Not))
      return nullptr;
    bool useful = g.is(FormulaKind::Or) || g.is(FormulaKind::Exists) ||
                  std::any_of(hyps_.begin(), hyps_.end(), [&](const Hyp& h) {
                    return reaches(h.f, kFalseKey);
                  });
    if (!useful) return nullptr;
    raa_used_ = true;
    Formula neg = Formula::negation(g);
    int label = push_assumption(neg);
    Proof p = solve_ground(Formula::falsum(), depth - 1);
    pop_assumption();
    raa_used_ = false;
    if (!p) return nullptr;
    ProofNode ni;
    ni.conclusion = Formula::negation(neg);
    ni.rule = Rule::NotI;
    ni.premises = {p};
    ni.discharged = {label};
    ProofNode nd;
    nd.conclusion = g;
    nd.rule = Rule::DNE;
    nd.premises = {make_node(std::move(ni))};
    return make_node(std::move(nd));
  }

  // ---- modal schemata -------------------------------------------------------

  // IK / IB: gather the agent's attitudes at times <= t2, prove the content
  // from their bodies alone, keep only what the inner proof used.
  Proof attitude_rule(const Formula& g, int depth) {
    FormulaKind kind = g.kind();
    Rule rule = kind == FormulaKind::Knows ? Rule::IK : Rule::IB;
    const Term& a = g.agent();
    const Term& t2 = g.time();
    std::string key = "#" + std::to_string(static_cast<int>(kind));

    struct Att {
      Formula f;
      Proof proof;
    };
    std::vector<Att> atts;
    Matcher m = [&](const Formula& cur, const Substitution& t0,
                    std::vector<Step>& steps, const Hyp& h) {
      if (!cur.is(kind)) return false;
      Substitution th = t0;
      Env env;
      if (!unify(cur.agent(), a, th, env)) return false;
      Term t1 = resolve(cur.time(), th);
      if (!t1.ground()) {
        if (!unify(t1, t2, th, env)) return false;
      } else if (!order_.less_equal(t1, t2)) {
        return false;
      }
      std::vector<Proof> subs;
      finish(h, steps, 0, depth, th, subs, [&](const Substitution& t3, const Proof& p) {
        Proof q = ground_proof(p, t3);
        if (!q || q->conclusion.has_metavariables()) return false;
        bool dup = std::any_of(atts.begin(), atts.end(), [&](const Att& x) {
          return x.f == q->conclusion;
        });
        if (!dup) atts.push_back(Att{q->conclusion, q});
        return true;
      });
      return false;
    };
    std::size_t n = hyps_.size();
    for (std::size_t i = 0; i < n; ++i) {
      Hyp h = hyps_[i];
      if (h.f.is(kind)) {
        if (h.f.agent() == a && order_.less_equal(h.f.time(), t2) &&
            std::none_of(atts.begin(), atts.end(), [&](const Att& x) { return x.f == h.f; }))
          atts.push_back(Att{h.f, h.proof});
        continue;
      }
      if (!reaches(h.f, key)) continue;
      std::vector<Step> steps;
      walk(h, h.f, steps, {}, key, m);
      if (aborted_) return nullptr;
    }

    // Inner derivation sees only the attitude contents.
    std::vector<Hyp> saved_hyps;
    std::vector<bool> saved_split;
    std::swap(saved_hyps, hyps_);
    std::swap(saved_split, split_used_);
    std::size_t saved_universe = universe_.size();
    bool saved_raa = raa_used_;
    raa_used_ = false;
    ctx_stack_.push_back(ctx_);
    ctx_ = ++ctx_counter_;
    std::vector<int> labels;
    for (const Att& x : atts) {
      int label = ++label_counter_;
      labels.push_back(label);
      hyps_.push_back(Hyp{x.f.body(), label, leaf(x.f.body(), label)});
      split_used_.push_back(false);
      add_universe(x.f.body());
    }
    Proof inner = solve_ground(g.body(), depth - 1);
    ctx_ = ctx_stack_.back();
    ctx_stack_.pop_back();
    raa_used_ = saved_raa;
    universe_.resize(saved_universe);
    std::swap(saved_hyps, hyps_);
    std::swap(saved_split, split_used_);
    if (!inner) return nullptr;

    std::unordered_set<int> used;
    for (const ProofNode* n2 : post_order(inner))
      if (n2->rule == Rule::Hyp && n2->hyp_label >= 0) used.insert(n2->hyp_label);

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < atts.size(); ++i)
      if (used.count(labels[i])) keep.push_back(i);

    Term t1 = t2;
    if (!keep.empty()) {
      t1 = atts[keep.front()].f.time();
      for (std::size_t i : keep)
        if (atts[i].f.time() != t1) t1 = t2;
    }
    ProofNode node;
    node.conclusion = g;
    node.rule = rule;
    node.time_from = t1;
    node.time_to = t2;
    for (std::size_t i : keep) {
      Proof prem = atts[i].proof;
      if (atts[i].f.time() != t1) {
        // Lift to the common time with a single-premise instance.
        Formula body = atts[i].f.body();
        int l = ++label_counter_;
        ProofNode lift;
        lift.conclusion = Formula::modal(kind, {a, t2}, body);
        lift.rule = rule;
        lift.premises = {prem, leaf(body, l)};
        lift.discharged = {l};
        lift.time_from = atts[i].f.time();
        lift.time_to = t2;
        prem = make_node(std::move(lift));
      }
      node.premises.push_back(prem);
      node.discharged.push_back(labels[i]);
    }
    node.premises.push_back(inner);
    return make_node(std::move(node));
  }

  // I14: an obligation plus beliefs in its condition and in itself.
  Proof intention_rule(const Formula& g, int depth) {
    const Formula& in = g.body();
    if (!in.is(FormulaKind::Intends) || in.agent() != g.agent() ||
        in.time() != g.time())
      return nullptr;
    const Term& a = g.agent();
    const Term& t = g.time();
    const Formula& chi = in.body();
    std::string key = "#" + std::to_string(static_cast<int>(FormulaKind::Ought));

    std::vector<Proof> oughts;
    Matcher m = [&](const Formula& cur, const Substitution& t0,
                    std::vector<Step>& steps, const Hyp& h) {
      if (!cur.is(FormulaKind::Ought)) return false;
      Substitution th = t0;
      Env env;
      if (!unify(cur.agent(), a, th, env) || !unify(cur.time(), t, th, env) ||
          !unify(cur.body(), chi, th, env))
        return false;
      std::vector<Proof> subs;
      finish(h, steps, 0, depth, th, subs, [&](const Substitution& t3, const Proof& p) {
        Proof q = ground_proof(p, t3);
        if (q && !q->conclusion.has_metavariables()) oughts.push_back(q);
        return q != nullptr;
      });
      return false;
    };
    std::size_t n = hyps_.size();
    for (std::size_t i = 0; i < n; ++i) {
      Hyp h = hyps_[i];
      if (h.f.is(FormulaKind::Ought)) {
        if (h.f.agent() == a && h.f.time() == t && h.f.body() == chi)
          oughts.push_back(h.proof);
        continue;
      }
      if (!reaches(h.f, key)) continue;
      std::vector<Step> steps;
      walk(h, h.f, steps, {}, key, m);
      if (aborted_) return nullptr;
    }
    for (const Proof& o : oughts) {
      const Formula& of = o->conclusion;
      Formula bc = Formula::modal(FormulaKind::Believes, {a, t}, of.condition());
      Formula bo = Formula::modal(FormulaKind::Believes, {a, t}, of);
      Proof p1 = solve_ground(bc, depth - 1);
      if (!p1) continue;
      Proof p2 = solve_ground(bo, depth - 1);
      if (!p2) continue;
      ProofNode node;
      node.conclusion = g;
      node.rule = Rule::I14;
      node.premises = {p1, p2, o};
      return make_node(std::move(node));
    }
    return nullptr;
  }

  // I13: an earlier intention with the same content.
  Proof perception_rule(const Formula& g, int depth) {
    const Term& t_after = g.time();
    Term t = fresh_meta(sorts::Moment);
    Formula want = Formula::modal(FormulaKind::Intends, {g.agent(), t}, g.body());
    Proof out;
    solve(want, depth - 1, {}, [&](const Substitution& th, const Proof& p) {
      Term tb = resolve(t, th);
      if (!tb.ground() || !order_.less(tb, t_after)) return false;
      Proof q = ground_proof(p, th);
      if (!q) return false;
      ProofNode node;
      node.conclusion = g;
      node.rule = Rule::I13;
      node.premises = {q};
      node.time_from = tb;
      node.time_to = t_after;
      out = make_node(std::move(node));
      return true;
    });
    return out;
  }

  const Signature& sig_;
  Budget budget_;
  MomentOrder order_;
  std::vector<Formula> gamma_;
  std::vector<Hyp> hyps_;
  std::vector<bool> split_used_;
  std::vector<Term> universe_;
  std::vector<long> ctx_stack_;
  long ctx_ = 0;
  long ctx_counter_ = 0;
  int label_counter_ = 0;
  long meta_counter_ = 0;
  long eigen_counter_ = 0;
  bool raa_used_ = false;
  int splits_ = 0;

  std::unordered_map<MemoKey, Proof, MemoKeyHash> success_;
  std::unordered_map<MemoKey, int, MemoKeyHash> failed_;
  std::unordered_set<MemoKey, MemoKeyHash> on_path_;
  long loop_cuts_ = 0;

  long steps_ = 0;
  bool aborted_ = false;
  bool depth_hit_ = false;
  bool size_hit_ = false;
  bool cand_hit_ = false;
};

}  // namespace

ProveResult prove(const Signature& sig, std::span<const Formula> gamma,
                  const Formula& goal, const Budget& budget) {
  Search s(sig, gamma, budget);
  ProveResult r;
  r.proof = s.run(goal);
  if (!r.proof) r.exhausted = s.exhausted();
  r.steps = s.steps();
  return r;
}

ProveResult prove(const KnowledgeBase& gamma, const Formula& goal,
                  const Budget& budget) {
  sort_check(gamma.signature(), goal);
  auto fs = gamma.formulas();
  return prove(gamma.signature(), fs, goal, budget);
}

ConsistencyResult consistent(const KnowledgeBase& gamma,
                             std::span<const Formula> extra,
                             const Budget& budget) {
  auto fs = gamma.formulas();
  for (const Formula& e : extra)
    if (std::find(fs.begin(), fs.end(), e) == fs.end()) fs.push_back(e);
  ProveResult r = prove(gamma.signature(), fs, Formula::falsum(), budget);
  ConsistencyResult out;
  out.refutation = r.proof;
  out.exhausted = r.exhausted;
  return out;
}

Proof prove_or_throw(const KnowledgeBase& gamma, const Formula& goal,
                     const Budget& budget) {
  ProveResult r = prove(gamma, goal, budget);
  if (!r.ok()) throw NoProofWithinBudget(pretty(goal), r.exhausted);
  return r.proof;
}

}  // namespace tai::prover
