#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "smce/constraint_model.hpp"
#include "smce/rule_catalog.hpp"
#include "smce/semantics.hpp"

namespace smce {

// Odometer order over images, null first when allowed; n^n or (n+1)^n graphs.
void for_each_selfmap(int n, bool allow_nulls, const std::function<void(std::span<const int>)>& fn);
std::vector<MappingInstance> enumerate_selfmaps(int n, bool allow_nulls);
std::uint64_t selfmap_count(int n, bool allow_nulls);

enum class Predicate {
  Flag,
  IsIdentity,
  SquareIsIdentity,
  NoPeriodicPoint,   // sm^k(x) != x for every k > 0
  IteratesStable,    // sm^k(x) = sm(x) for every k > 0
  AntiIdempotent,
  SquareAllNull,
  Transitive,
};

struct Atom {
  Predicate predicate = Predicate::Flag;
  ConstraintType flag = ConstraintType::Total;
  Variant variant = Variant::Plain;
  bool negated = false;

  bool eval(std::span<const int> g) const;
  std::string text() const;
};

Atom flag(ConstraintType t, Variant v = Variant::Plain);
Atom null_flag(ConstraintType t);
Atom pred(Predicate p);
Atom operator!(Atom a);

enum class PropositionForm { Implication, Equivalence, Exclusion };
enum class Scope { All, TotalOnly };

struct PropositionSpec {
  std::string id;
  std::vector<Atom> hypothesis;  // conjunction
  std::vector<Atom> conclusion;  // conjunction
  PropositionForm form = PropositionForm::Implication;
  Scope scope = Scope::All;

  std::string text() const;
  // True when the graph is a counterexample.
  bool refuted_by(std::span<const int> g) const;
};

struct VerificationReport {
  std::string id;
  int n = 0;
  std::uint64_t checked = 0;
  std::vector<MappingInstance> counterexamples;
  bool passed() const noexcept { return counterexamples.empty(); }
};

// The in-scope propositions, in ledger order.
const std::vector<PropositionSpec>& proposition_specs();
const PropositionSpec& find_proposition(std::string_view id);

VerificationReport verify_proposition(const PropositionSpec& spec, int n);
std::vector<VerificationReport> verify_all(int n);

enum class AuditClass { Coherent, Rejected, NoModel, PolicyIncoherent, Refuted };

std::string_view to_string(AuditClass c) noexcept;

struct AuditEntry {
  ConstraintFlags flags;
  VerdictKind verdict = VerdictKind::Coherent;
  std::optional<std::string> note;
  AuditClass cls = AuditClass::Coherent;
  std::uint64_t models = 0;
  std::optional<MappingInstance> witness;  // a non-identity model of an incoherent combination
};

struct RuleCheck {
  std::string corollary;
  ConstraintFlags premise;
  ConstraintType conclusion;
  std::uint64_t counterexamples = 0;
  std::optional<MappingInstance> witness;
};

struct AuditReport {
  int n = 0;
  std::uint64_t combinations = 0;
  std::uint64_t incoherent = 0;
  std::uint64_t no_model = 0;
  std::uint64_t policy_incoherent = 0;
  std::vector<AuditEntry> refutations;
  std::vector<AuditEntry> policy;  // combinations whose sole model is the identity
  std::vector<RuleCheck> rules;    // one per (redundancy rule, concluded flag)
  std::uint64_t invalid_rules = 0;

  bool passed() const noexcept { return refutations.empty() && invalid_rules == 0; }
};

// The 12 flags with instance semantics that an oracle can evaluate.
inline constexpr ConstraintFlags kSemanticFlags{
    ConstraintType::Total,      ConstraintType::OneToOne,   ConstraintType::Onto,
    ConstraintType::Bijective,  ConstraintType::Reflexive,  ConstraintType::Irreflexive,
    ConstraintType::Symmetric,  ConstraintType::Asymmetric, ConstraintType::Idempotent,
    ConstraintType::Equivalence, ConstraintType::Acyclic,   ConstraintType::RepresentativeSystemMapping};

// Every SM-set combination of kSemanticFlags, in increasing code order.
std::vector<ConstraintFlags> semantic_combinations();

AuditReport audit_catalog(const RuleCatalog& cat, int n);

nlohmann::json report_to_json(const VerificationReport& r);
nlohmann::json audit_to_json(const AuditReport& r);

}  // namespace smce
