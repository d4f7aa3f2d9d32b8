#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "smce/constraint_model.hpp"

namespace smce {

enum class CorollaryKind { Incoherence, Redundancy, Rejection };

std::string_view to_string(CorollaryKind k) noexcept;

struct CorollaryRecord {
  std::string id;
  CorollaryKind kind;
  std::string description;
  std::string section;
  bool operator==(const CorollaryRecord&) const = default;
};

// In ledger order; the index is the ledger ordinal.
const std::vector<CorollaryRecord>& corollary_ledger();
const CorollaryRecord& find_corollary(std::string_view id);
int corollary_ordinal(std::string_view id);
// "A.6.1.1 (x). one-to-one ^ onto => bijective"
std::string render_note(std::string_view id);

struct Term {
  ConstraintFlags required;
  ConstraintFlags forbidden;
  bool matches(ConstraintFlags f) const noexcept {
    return f.contains_all(required) && !f.intersects(forbidden);
  }
};

// Disjunction of conjunctive terms.
struct Pattern {
  std::string corollary;
  std::vector<Term> any;
  bool matches(ConstraintFlags f) const noexcept;
};

struct RedundancyRule {
  std::string corollary;
  Term premise;
  ConstraintFlags conclusion;
};

enum class Compoundness { Single, Compound };

struct RejectionRow {
  std::string note;
  Term pattern;
  bool single_only = false;
  bool matches(ConstraintFlags f, Compoundness c) const noexcept {
    return pattern.matches(f) && (!single_only || c == Compoundness::Single);
  }
};

const std::vector<Pattern>& trivial_patterns();
const std::vector<Pattern>& incoherence_patterns();
const std::vector<RedundancyRule>& redundancy_rules();
const std::vector<RejectionRow>& rejection_patterns();

struct ImpliedFlag {
  ConstraintType flag;
  std::string note;
  bool operator==(const ImpliedFlag&) const = default;
};

struct Derivation {
  ConstraintFlags full;
  // Index into redundancy_rules() of the rule that first derived each flag, by bit position; -1 if none.
  std::array<int, kConstraintTypeCount> rule_of{};
};

// Forward chaining to the least fixpoint.
Derivation derive(ConstraintFlags f);

struct BasisPreference {
  ConstraintFlags keep;          // never demoted
  ConstraintFlags demote_first;  // tried before the other candidates
  // Derived elsewhere: used as premises, never part of the basis, reported as redundant.
  ConstraintFlags given;
};

struct Closure {
  ConstraintFlags full;
  ConstraintFlags basis;
  ConstraintFlags replaced;  // moved out of the basis by the onto/one-to-one replacement
  std::vector<ImpliedFlag> redundant;  // full - basis, descending weight; given flags not derivable from the basis carry an empty note
};

// No coherence check.
Closure closure_of(ConstraintFlags f, const BasisPreference& pref = {});

std::optional<std::string> trivial_note(ConstraintFlags f);
// Note making f incoherent (raw set first, then its closure), if any; trivial patterns excluded on the raw set.
std::optional<std::string> incoherence_note(ConstraintFlags f);

struct CoherenceRow {
  CombinationCode x;
  bool coherent = true;
  std::optional<std::string> note;
};

struct RedundancyRow {
  CombinationCode x;
  ConstraintType redundant;
  std::string note;
};

enum class VerdictKind { TriviallyIncoherent, Incoherent, Rejected, Coherent };

std::string_view to_string(VerdictKind k) noexcept;

struct Verdict {
  VerdictKind kind = VerdictKind::Coherent;
  std::optional<std::string> note;
  std::vector<ImpliedFlag> redundant;
  std::vector<ImpliedFlag> additional;
};

class RuleCatalog {
 public:
  const std::vector<CorollaryRecord>& corollaries() const noexcept { return corollaries_; }
  const std::vector<CoherenceRow>& coherence_rows() const noexcept { return coherence_; }
  const std::vector<RedundancyRow>& redundancy_rows() const noexcept { return redundancies_; }
  const std::vector<RedundancyRow>& additional_rows() const noexcept { return additional_; }
  const std::vector<RejectionRow>& rejection_rows() const noexcept { return rejections_; }
  std::size_t enumerated() const noexcept { return enumerated_; }

  const CoherenceRow* row(CombinationCode x) const;
  std::span<const RedundancyRow> redundancies(CombinationCode x) const;
  std::span<const RedundancyRow> additional(CombinationCode x) const;

  friend RuleCatalog generate_catalog();

 private:
  struct Range {
    std::uint32_t red_begin = 0, red_end = 0, add_begin = 0, add_end = 0;
  };
  std::vector<CorollaryRecord> corollaries_;
  std::vector<CoherenceRow> coherence_;
  std::vector<Range> ranges_;
  std::vector<std::int32_t> index_;
  std::vector<RedundancyRow> redundancies_;
  std::vector<RedundancyRow> additional_;
  std::vector<RejectionRow> rejections_;
  std::size_t enumerated_ = 0;
};

RuleCatalog generate_catalog();
// Built once per process.
const RuleCatalog& default_catalog();

Verdict lookup(const RuleCatalog& cat, CombinationCode x, Compoundness c = Compoundness::Single);
// Throws CoherenceError when lookup reports an incoherent set.
Closure redundancy_closure(const RuleCatalog& cat, ConstraintFlags flags, const BasisPreference& pref = {});

void write_corollaries_csv(std::ostream& os, const RuleCatalog& cat);
void write_coherencies_csv(std::ostream& os, const RuleCatalog& cat);
void write_redundancies_csv(std::ostream& os, const RuleCatalog& cat);
nlohmann::json catalog_to_json(const RuleCatalog& cat);
nlohmann::json verdict_to_json(const Verdict& v);

}  // namespace smce
