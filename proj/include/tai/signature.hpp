#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tai {

/// A sort name. Sorts form a single-inheritance forest held by a Signature.
class Sort {
 public:
  Sort() = default;
  explicit Sort(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  bool empty() const { return name_.empty(); }

  friend bool operator==(const Sort&, const Sort&) = default;
  friend auto operator<=>(const Sort&, const Sort&) = default;

 private:
  std::string name_;
};

namespace sorts {
inline const Sort Agent{"Agent"};
inline const Sort ActionType{"ActionType"};
inline const Sort Action{"Action"};
inline const Sort Event{"Event"};
inline const Sort Moment{"Moment"};
inline const Sort Fluent{"Fluent"};
inline const Sort Boolean{"Boolean"};
inline const Sort Plan{"Plan"};
inline const Sort AgentList{"AgentList"};
}  // namespace sorts

/// Profile of a function symbol. Predicates are functions into Boolean.
struct FunctionDecl {
  std::string name;
  std::vector<Sort> args;
  Sort result;
  bool builtin = false;
};

using FunctionRef = std::shared_ptr<const FunctionDecl>;

/// Names of the built-in function symbols.
namespace sym {
inline constexpr const char* action = "action";
inline constexpr const char* initially = "initially";
inline constexpr const char* holds = "holds";
inline constexpr const char* happens = "happens";
inline constexpr const char* clipped = "clipped";
inline constexpr const char* initiates = "initiates";
inline constexpr const char* terminates = "terminates";
inline constexpr const char* prior = "prior";
inline constexpr const char* can = "can";
inline constexpr const char* next = "next";
inline constexpr const char* plan = "plan";
inline constexpr const char* executed = "executed";
inline constexpr const char* within = "within";
inline constexpr const char* plan_empty = "plan-empty";
inline constexpr const char* plan_then = "plan-then";
inline constexpr const char* agents_nil = "agents-nil";
inline constexpr const char* agents_cons = "agents-cons";
}  // namespace sym

/// Sorts, function symbols and constants of a DCEC language.
///
/// A default-constructed Signature already contains the built-in sorts
/// (Action below Event) and the event-calculus, capability and plan symbols.
/// User declarations may extend it but never shadow anything already present.
class Signature {
 public:
  Signature();

  void declare_sort(const std::string& name,
                    std::optional<std::string> parent = std::nullopt);
  FunctionRef declare_function(const std::string& name, std::vector<Sort> args,
                               Sort result);
  void declare_constant(const std::string& name, Sort sort);
  /// Names an integer moment, e.g. `t3` for 3. Aliases parse to the literal.
  void declare_moment_alias(const std::string& name, long value);
  std::optional<long> moment_alias(const std::string& name) const;

  bool has_sort(const std::string& name) const;
  std::optional<Sort> parent(const Sort& s) const;
  /// Reflexive-transitive subsort relation.
  bool is_subsort(const Sort& sub, const Sort& super) const;

  FunctionRef function(const std::string& name) const;  // null when absent
  std::optional<Sort> constant(const std::string& name) const;
  bool is_declared(const std::string& name) const;
  static bool is_reserved(const std::string& name);

  /// Declarations in insertion order, built-ins excluded.
  const std::vector<std::string>& user_sorts() const { return user_sorts_; }
  const std::vector<FunctionRef>& user_functions() const { return user_fns_; }
  const std::vector<std::pair<std::string, Sort>>& user_constants() const {
    return user_consts_;
  }

  /// Scenario-syntax declarations that rebuild the user part of this signature.
  std::string declarations_text() const;

 private:
  FunctionRef add_function(FunctionDecl decl);

  std::map<std::string, std::optional<std::string>> sorts_;
  std::map<std::string, FunctionRef> functions_;
  std::map<std::string, Sort> constants_;
  std::vector<std::string> user_sorts_;
  std::vector<FunctionRef> user_fns_;
  std::vector<std::pair<std::string, Sort>> user_consts_;
  std::map<std::string, long> aliases_;
  std::vector<std::string> alias_order_;
};

}  // namespace tai
