#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "smce/catalog_store.hpp"
#include "smce/constraint_state.hpp"
#include "smce/rule_catalog.hpp"
#include "smce/semantics.hpp"

namespace smce {

enum class OutcomeStatus {
  Accepted,
  RejectedIncoherent,
  RejectedTrivial,
  RejectedUnity,
  RejectedUnsatisfied,
  RejectedRedundantRemoval,
};

std::string_view to_string(OutcomeStatus s) noexcept;

enum class PlanAction { InstallCheck, RemoveCheck };

std::string_view to_string(PlanAction a) noexcept;

struct PlanDelta {
  ConstraintType type;
  PlanAction action;
  bool operator==(const PlanDelta&) const = default;
};

struct EnforcementPlan {
  MappingId mapping{};
  std::vector<PlanDelta> deltas;
  // Implications that rest on an assumption the data could not confirm.
  std::vector<std::string> annotations;
  bool operator==(const EnforcementPlan&) const = default;
};

struct WorkCount {
  int lookups = 0;
  int closures = 0;
  int scans = 0;
};

struct Outcome {
  OutcomeStatus status = OutcomeStatus::Accepted;
  std::string message;
  std::optional<std::string> note;
  ConstraintState state;
  std::vector<EnforcementPlan> plans;
  // Accepted without an instance to check against.
  bool unchecked = false;
  WorkCount work;

  bool accepted() const noexcept { return status == OutcomeStatus::Accepted; }
};

enum class Operation { Add, Remove };

std::string message_for(OutcomeStatus status, ConstraintType c, std::string_view mapping,
                        const std::optional<std::string>& note, Operation op = Operation::Add);

// Plan deltas for the asserted non-system members that changed between two states.
EnforcementPlan plan_between(const ConstraintState& before, const ConstraintState& after);

Outcome add_constraint(const ConstraintState& state, ConstraintType c, const MappingInstance* instance,
                       const RuleCatalog& cat, const MappingDescriptor& desc);
Outcome remove_constraint(const ConstraintState& state, ConstraintType c, const RuleCatalog& cat,
                          const MappingDescriptor& desc);

// Re-derives the database containing `changed` to the cross-mapping fixpoint and commits it when every
// touched constraint set stays coherent. `keep` is protected from demotion. Returns one outcome per
// mapping whose state changed; on a rejection nothing is committed and the rejection comes first.
std::vector<Outcome> propagate_composition(Metacatalog& meta, MappingId changed, const RuleCatalog& cat,
                                           std::optional<ConstraintType> keep = std::nullopt);
// Same fixpoint for a whole database, with no protected member.
std::vector<Outcome> reconcile_database(Metacatalog& meta, DatabaseId db, const RuleCatalog& cat);

struct ToggleResult {
  OutcomeStatus status = OutcomeStatus::Accepted;
  std::string message;
  std::optional<std::string> note;
  bool noop = false;
  bool unchecked = false;
  // Trigger first, then other affected mappings.
  std::vector<Outcome> outcomes;
  std::vector<EnforcementPlan> plans;

  bool accepted() const noexcept { return status == OutcomeStatus::Accepted; }
};

// add/remove plus propagation; the metacatalog changes only when everything is accepted.
ToggleResult toggle_constraint(Metacatalog& meta, MappingId id, ConstraintType c, bool desired,
                               const RuleCatalog& cat);

struct RetypeRequest {
  std::optional<bool> inclusion;
  std::optional<bool> canonical_projection;
  std::optional<bool> canonical_injection;
};

ToggleResult retype_mapping(Metacatalog& meta, MappingId id, const RetypeRequest& req, const RuleCatalog& cat);

// Deletes the mapping (and compounds containing it), then reconciles the rest of its database.
std::vector<Outcome> delete_mapping(Metacatalog& meta, MappingId id, const RuleCatalog& cat);

nlohmann::json plan_to_json(const EnforcementPlan& p);
nlohmann::json outcome_to_json(const Outcome& o);

}  // namespace smce
