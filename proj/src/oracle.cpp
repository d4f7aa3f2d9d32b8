#include "smce/oracle.hpp"

#include <algorithm>

#include "smce/errors.hpp"

namespace smce {

using CT = ConstraintType;
using nlohmann::json;

void for_each_selfmap(int n, bool allow_nulls, const std::function<void(std::span<const int>)>& fn) {
  if (n < 0) throw ArgumentError("set size must be non-negative");
  const int lo = allow_nulls ? kNull : 0;
  std::vector<int> g(static_cast<std::size_t>(n), lo);
  while (true) {
    fn(g);
    int i = n - 1;
    while (i >= 0 && g[static_cast<std::size_t>(i)] == n - 1) g[static_cast<std::size_t>(i--)] = lo;
    if (i < 0) return;
    ++g[static_cast<std::size_t>(i)];
  }
}

std::uint64_t selfmap_count(int n, bool allow_nulls) {
  std::uint64_t base = static_cast<std::uint64_t>(n) + (allow_nulls ? 1 : 0), c = 1;
  for (int i = 0; i < n; ++i) c *= base;
  return c;
}

namespace {

FiniteSet oracle_set(int n) {
  std::vector<ElementId> e;
  for (int i = 0; i < n; ++i) e.push_back(std::to_string(i));
  return FiniteSet("S", std::move(e));
}

MappingInstance to_instance(std::span<const int> g) {
  return MappingInstance::self_map(oracle_set(static_cast<int>(g.size())), std::vector<int>(g.begin(), g.end()));
}

int step(std::span<const int> g, int x) { return x == kNull ? kNull : g[static_cast<std::size_t>(x)]; }

bool is_identity(std::span<const int> g) {
  for (std::size_t x = 0; x < g.size(); ++x)
    if (g[x] != static_cast<int>(x)) return false;
  return true;
}

bool square_is_identity(std::span<const int> g) {
  for (std::size_t x = 0; x < g.size(); ++x)
    if (step(g, step(g, static_cast<int>(x))) != static_cast<int>(x)) return false;
  return true;
}

bool no_periodic_point(std::span<const int> g) {
  for (std::size_t x = 0; x < g.size(); ++x) {
    int y = static_cast<int>(x);
    for (std::size_t k = 0; k < g.size(); ++k) {
      y = step(g, y);
      if (y == static_cast<int>(x)) return false;
    }
  }
  return true;
}

bool iterates_stable(std::span<const int> g) {
  for (std::size_t x = 0; x < g.size(); ++x) {
    int first = g[x];
    int y = first;
    for (std::size_t k = 1; k <= g.size(); ++k) {
      if (y != first) return false;
      y = step(g, y);
    }
  }
  return true;
}

bool square_all_null(std::span<const int> g) {
  for (std::size_t x = 0; x < g.size(); ++x)
    if (step(g, step(g, static_cast<int>(x))) != kNull) return false;
  return true;
}

bool transitive(std::span<const int> g) {
  for (int y : g) {
    int z = step(g, y);
    if (z != kNull && z != y) return false;
  }
  return true;
}

bool nonempty(std::span<const int> g) {
  return std::any_of(g.begin(), g.end(), [](int y) { return y != kNull; });
}

bool all_hold(const std::vector<Atom>& atoms, std::span<const int> g) {
  return std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.eval(g); });
}

std::string join(const std::vector<Atom>& atoms) {
  std::string s;
  for (const auto& a : atoms) s += (s.empty() ? "" : " ^ ") + a.text();
  return s;
}

}  // namespace

std::vector<MappingInstance> enumerate_selfmaps(int n, bool allow_nulls) {
  std::vector<MappingInstance> out;
  out.reserve(selfmap_count(n, allow_nulls));
  for_each_selfmap(n, allow_nulls, [&](std::span<const int> g) { out.push_back(to_instance(g)); });
  return out;
}

bool Atom::eval(std::span<const int> g) const {
  bool v = false;
  switch (predicate) {
    case Predicate::Flag: v = graph::check(g, flag, variant); break;
    case Predicate::IsIdentity: v = is_identity(g); break;
    case Predicate::SquareIsIdentity: v = square_is_identity(g); break;
    case Predicate::NoPeriodicPoint: v = no_periodic_point(g); break;
    case Predicate::IteratesStable: v = iterates_stable(g); break;
    case Predicate::AntiIdempotent: v = graph::anti_idempotent(g); break;
    case Predicate::SquareAllNull: v = square_all_null(g); break;
    case Predicate::Transitive: v = transitive(g); break;
  }
  return v != negated;
}

std::string Atom::text() const {
  std::string s;
  switch (predicate) {
    case Predicate::Flag:
      s = (variant == Variant::Null ? "null-" : "") + std::string(abbreviation(flag));
      break;
    case Predicate::IsIdentity: s = "sm = 1_S"; break;
    case Predicate::SquareIsIdentity: s = "sm^2 = 1_S"; break;
    case Predicate::NoPeriodicPoint: s = "sm^k(x) != x"; break;
    case Predicate::IteratesStable: s = "sm^k(x) = sm(x)"; break;
    case Predicate::AntiIdempotent: s = "anti-idempotent"; break;
    case Predicate::SquareAllNull: s = "sm^2(x) null"; break;
    case Predicate::Transitive: s = "transitive"; break;
  }
  return negated ? "not " + s : s;
}

Atom flag(ConstraintType t, Variant v) { return Atom{Predicate::Flag, t, v, false}; }
Atom null_flag(ConstraintType t) { return flag(t, Variant::Null); }
Atom pred(Predicate p) { return Atom{p, CT::Total, Variant::Plain, false}; }
Atom operator!(Atom a) {
  a.negated = !a.negated;
  return a;
}

std::string PropositionSpec::text() const {
  std::string op = form == PropositionForm::Implication ? " => " : form == PropositionForm::Equivalence ? " <=> " : " excludes ";
  std::string s = join(hypothesis) + op + join(conclusion);
  return scope == Scope::TotalOnly ? s + " (total maps)" : s;
}

bool PropositionSpec::refuted_by(std::span<const int> g) const {
  if (scope == Scope::TotalOnly && !graph::total(g)) return false;
  bool h = all_hold(hypothesis, g);
  bool c = all_hold(conclusion, g);
  switch (form) {
    case PropositionForm::Implication: return h && !c;
    case PropositionForm::Equivalence: return h != c;
    case PropositionForm::Exclusion: return h && c && nonempty(g);
  }
  return false;
}

const std::vector<PropositionSpec>& proposition_specs() {
  using F = PropositionForm;
  using P = Predicate;
  const auto All = Scope::All;
  const auto Tot = Scope::TotalOnly;
  static const std::vector<PropositionSpec> specs = {
      {"P0.ii", {flag(CT::Idempotent)}, {pred(P::Transitive)}, F::Equivalence, Tot},
      {"P0.iv.a", {null_flag(CT::Idempotent), pred(P::AntiIdempotent)}, {pred(P::SquareAllNull)}, F::Equivalence, All},
      {"P0.iv.b", {pred(P::SquareAllNull)}, {null_flag(CT::Idempotent)}, F::Implication, All},
      {"P1.vi", {flag(CT::Reflexive)}, {flag(CT::Irreflexive)}, F::Exclusion, Tot},
      {"P1.vii", {flag(CT::Symmetric)}, {flag(CT::Asymmetric)}, F::Exclusion, Tot},
      {"P3.i", {flag(CT::Onto), flag(CT::Total)}, {flag(CT::OneToOne), flag(CT::Total)}, F::Equivalence, All},
      {"P3.iii", {pred(P::IsIdentity)}, {flag(CT::Equivalence)}, F::Equivalence, Tot},
      {"P3.iv", {flag(CT::Reflexive)}, {pred(P::IsIdentity)}, F::Equivalence, Tot},
      {"P3.vi", {flag(CT::OneToOne), !pred(P::IsIdentity)}, {flag(CT::Irreflexive), !flag(CT::Idempotent)},
       F::Implication, Tot},
      {"P4", {flag(CT::Symmetric)}, {pred(P::SquareIsIdentity)}, F::Equivalence, Tot},
      {"P5", {flag(CT::Acyclic)}, {pred(P::NoPeriodicPoint)}, F::Equivalence, All},
      {"P6", {flag(CT::Idempotent)}, {pred(P::IteratesStable)}, F::Equivalence, Tot},
      {"P7.i", {flag(CT::Asymmetric)}, {flag(CT::Irreflexive)}, F::Implication, All},
      {"P7.ii", {pred(P::AntiIdempotent)}, {flag(CT::Irreflexive)}, F::Equivalence, All},
      {"P7.iii", {flag(CT::Acyclic)}, {flag(CT::Asymmetric), !flag(CT::Idempotent)}, F::Implication, All},
      {"P8", {flag(CT::Irreflexive), flag(CT::Idempotent)}, {flag(CT::Asymmetric)}, F::Implication, Tot},
      {"P9", {flag(CT::Symmetric), flag(CT::Idempotent)}, {flag(CT::Reflexive)}, F::Implication, Tot},
      {"P10", {flag(CT::Asymmetric), flag(CT::Idempotent)}, {flag(CT::Acyclic)}, F::Implication, Tot},
      {"P11", {flag(CT::RepresentativeSystemMapping)}, {flag(CT::Idempotent)}, F::Implication, Tot},
      {"P12.i", {null_flag(CT::Reflexive)}, {flag(CT::Reflexive)}, F::Equivalence, Tot},
      {"P12.ii", {null_flag(CT::Symmetric)}, {flag(CT::Symmetric)}, F::Equivalence, Tot},
      {"P12.iii", {null_flag(CT::Idempotent)}, {flag(CT::Idempotent)}, F::Equivalence, Tot},
      {"P12.iv", {null_flag(CT::Equivalence)}, {flag(CT::Equivalence)}, F::Equivalence, Tot},
      {"P12.v", {null_flag(CT::RepresentativeSystemMapping)}, {flag(CT::RepresentativeSystemMapping)},
       F::Equivalence, Tot},
      {"P13.i", {null_flag(CT::Reflexive)}, {flag(CT::OneToOne), null_flag(CT::Idempotent)}, F::Implication, All},
      {"P13.ii", {null_flag(CT::RepresentativeSystemMapping), flag(CT::OneToOne)}, {null_flag(CT::Reflexive)},
       F::Implication, All},
      {"P13.iii", {flag(CT::Irreflexive), null_flag(CT::Idempotent)}, {flag(CT::Asymmetric)}, F::Implication, All},
      {"P13.iv", {null_flag(CT::Symmetric), null_flag(CT::Idempotent)}, {null_flag(CT::Reflexive)},
       F::Implication, All},
      {"P13.v", {flag(CT::Asymmetric), null_flag(CT::Idempotent)}, {flag(CT::Acyclic)}, F::Implication, All},
      {"P13.vi", {null_flag(CT::RepresentativeSystemMapping)}, {null_flag(CT::Idempotent)}, F::Implication, All},
  };
  return specs;
}

const PropositionSpec& find_proposition(std::string_view id) {
  for (const auto& s : proposition_specs())
    if (s.id == id) return s;
  throw NotFoundError("unknown proposition " + std::string(id));
}

VerificationReport verify_proposition(const PropositionSpec& spec, int n) {
  for (const auto* side : {&spec.hypothesis, &spec.conclusion})
    for (const auto& a : *side)
      if (a.predicate == Predicate::Flag && (!is_checkable(a.flag) || a.flag == CT::SelfMap))
        throw SpecError(spec.id + " references the uncheckable flag " + std::string(abbreviation(a.flag)));
  VerificationReport r{spec.id, n, 0, {}};
  for_each_selfmap(n, true, [&](std::span<const int> g) {
    ++r.checked;
    if (spec.refuted_by(g)) r.counterexamples.push_back(to_instance(g));
  });
  return r;
}

std::vector<VerificationReport> verify_all(int n) {
  std::vector<VerificationReport> out;
  for (const auto& s : proposition_specs()) out.push_back(verify_proposition(s, n));
  return out;
}

std::string_view to_string(AuditClass c) noexcept {
  switch (c) {
    case AuditClass::Coherent: return "coherent";
    case AuditClass::Rejected: return "rejected";
    case AuditClass::NoModel: return "no-model";
    case AuditClass::PolicyIncoherent: return "policy-incoherent";
    case AuditClass::Refuted: return "refuted";
  }
  return "";
}

std::vector<ConstraintFlags> semantic_combinations() {
  const auto bits = kSemanticFlags.members();
  std::vector<ConstraintFlags> out;
  for (std::uint32_t m = 0; m < (1u << bits.size()); ++m) {
    ConstraintFlags f{CT::SelfMap};
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (m & (1u << i)) f |= bits[i];
    out.push_back(f);
  }
  std::sort(out.begin(), out.end(), [](ConstraintFlags a, ConstraintFlags b) { return a.bits() < b.bits(); });
  return out;
}

namespace {

bool satisfies(std::span<const int> g, ConstraintFlags f) {
  auto sem = effective_semantics(f);
  for (auto t : (f & kSemanticFlags).members())
    if (!graph::check(g, t, sem.variant(t))) return false;
  return true;
}

}  // namespace

AuditReport audit_catalog(const RuleCatalog& cat, int n) {
  AuditReport rep;
  rep.n = n;
  std::vector<std::vector<int>> graphs;
  for_each_selfmap(n, true, [&](std::span<const int> g) {
    if (nonempty(g)) graphs.emplace_back(g.begin(), g.end());
  });
  for (auto f : semantic_combinations()) {
    ++rep.combinations;
    auto v = lookup(cat, encode(f), Compoundness::Single);
    if (v.kind != VerdictKind::Incoherent && v.kind != VerdictKind::TriviallyIncoherent) continue;
    ++rep.incoherent;
    AuditEntry e{f, v.kind, v.note, AuditClass::NoModel, 0, std::nullopt};
    bool only_identity = true;
    for (const auto& g : graphs) {
      if (!satisfies(g, f)) continue;
      ++e.models;
      if (!is_identity(g) && only_identity) {
        only_identity = false;
        e.witness = to_instance(g);
      }
    }
    if (e.models == 0) {
      ++rep.no_model;
    } else if (only_identity) {
      e.cls = AuditClass::PolicyIncoherent;
      ++rep.policy_incoherent;
      rep.policy.push_back(std::move(e));
    } else {
      e.cls = AuditClass::Refuted;
      rep.refutations.push_back(std::move(e));
    }
  }
  std::vector<std::vector<int>> all;
  for_each_selfmap(n, true, [&](std::span<const int> g) { all.emplace_back(g.begin(), g.end()); });
  for (const auto& r : redundancy_rules()) {
    auto premise = r.premise.required;
    if (!(premise - CT::SelfMap - kSemanticFlags).empty()) continue;
    for (auto t : (r.conclusion & kSemanticFlags).members()) {
      RuleCheck rc{r.corollary, premise, t, 0, std::nullopt};
      auto variant = effective_semantics(premise).variant(t);
      for (const auto& g : all) {
        if (!satisfies(g, premise)) continue;
        if (graph::check(g, t, variant)) continue;
        if (rc.counterexamples++ == 0) rc.witness = to_instance(g);
      }
      if (rc.counterexamples) ++rep.invalid_rules;
      rep.rules.push_back(std::move(rc));
    }
  }
  return rep;
}

json report_to_json(const VerificationReport& r) {
  json ce = json::array();
  for (const auto& c : r.counterexamples) ce.push_back(format_inline_instance(c));
  return {{"id", r.id},
          {"n", r.n},
          {"checked", r.checked},
          {"passed", r.passed()},
          {"statement", find_proposition(r.id).text()},
          {"counterexamples", std::move(ce)}};
}

json audit_to_json(const AuditReport& r) {
  auto entry = [](const AuditEntry& e) {
    json j = {{"flags", format_flags(e.flags)},
              {"code", encode(e.flags).value},
              {"verdict", std::string(to_string(e.verdict))},
              {"class", std::string(to_string(e.cls))},
              {"models", e.models}};
    j["note"] = e.note ? json(*e.note) : json(nullptr);
    j["witness"] = e.witness ? json(format_inline_instance(*e.witness)) : json(nullptr);
    return j;
  };
  json refs = json::array(), policy = json::array(), rules = json::array();
  for (const auto& e : r.refutations) refs.push_back(entry(e));
  for (const auto& e : r.policy) policy.push_back(entry(e));
  for (const auto& c : r.rules) {
    json j = {{"corollary", c.corollary},
              {"premise", format_flags(c.premise)},
              {"conclusion", std::string(abbreviation(c.conclusion))},
              {"counterexamples", c.counterexamples}};
    j["witness"] = c.witness ? json(format_inline_instance(*c.witness)) : json(nullptr);
    rules.push_back(std::move(j));
  }
  return {{"n", r.n},
          {"combinations", r.combinations},
          {"incoherent", r.incoherent},
          {"no_model", r.no_model},
          {"policy_incoherent", r.policy_incoherent},
          {"refutations", std::move(refs)},
          {"policy", std::move(policy)},
          {"rules", std::move(rules)},
          {"invalid_rules", r.invalid_rules},
          {"passed", r.passed()}};
}

}  // namespace smce
