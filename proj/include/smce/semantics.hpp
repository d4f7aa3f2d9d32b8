#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "smce/constraint_model.hpp"

namespace smce {

using ElementId = std::string;

// Index value for a null image.
inline constexpr int kNull = -1;

class FiniteSet {
 public:
  FiniteSet() = default;
  FiniteSet(std::string name, std::vector<ElementId> elements);

  const std::string& name() const noexcept { return name_; }
  const std::vector<ElementId>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::optional<std::size_t> index_of(const ElementId& e) const;
  bool contains(const ElementId& e) const { return index_.count(e) != 0; }
  bool same_elements(const FiniteSet& o) const;

  bool operator==(const FiniteSet& o) const { return name_ == o.name_ && elements_ == o.elements_; }

 private:
  std::string name_;
  std::vector<ElementId> elements_;
  std::unordered_map<ElementId, std::size_t> index_;
};

class MappingInstance {
 public:
  MappingInstance() = default;
  // images[i] is the image of domain.elements()[i]; nullopt is a null image.
  MappingInstance(FiniteSet domain, FiniteSet codomain, const std::vector<std::optional<ElementId>>& images);
  // graph[i] indexes codomain.elements(), or kNull.
  MappingInstance(FiniteSet domain, FiniteSet codomain, std::vector<int> graph);
  static MappingInstance self_map(FiniteSet s, std::vector<int> graph);

  const FiniteSet& domain() const noexcept { return domain_; }
  const FiniteSet& codomain() const noexcept { return codomain_; }
  std::span<const int> graph() const noexcept { return graph_; }
  std::optional<ElementId> at(const ElementId& x) const;

  bool is_self_map() const { return domain_.same_elements(codomain_); }
  // Graph re-indexed into domain indices; requires a self-map.
  std::vector<int> self_graph() const;

  bool operator==(const MappingInstance&) const = default;

 private:
  FiniteSet domain_;
  FiniteSet codomain_;
  std::vector<int> graph_;
};

struct Partition {
  std::vector<std::vector<ElementId>> blocks;
  bool operator==(const Partition&) const = default;
};

MappingInstance identity_of(const FiniteSet& s);
std::vector<ElementId> image(const MappingInstance& f);
MappingInstance restrict(const MappingInstance& f, const std::vector<ElementId>& b);
MappingInstance compose(const MappingInstance& g, const MappingInstance& f);
Partition kernel_quotient(const MappingInstance& sm);

bool check_constraint(const MappingInstance& f, ConstraintType c, Variant v = Variant::Plain);
bool satisfies_set(const MappingInstance& f, ConstraintFlags flags);
// Members of flags (checkable ones only) that f violates.
ConstraintFlags violations(const MappingInstance& f, ConstraintFlags flags);

bool is_anti_idempotent(const MappingInstance& sm);
bool is_transitive(const MappingInstance& sm);

// Predicates over raw self-map graphs (values are indices into the same set, or kNull).
namespace graph {
bool total(std::span<const int> g);
bool one_to_one(std::span<const int> g);
bool onto(std::span<const int> g, std::size_t codomain_size);
bool reflexive(std::span<const int> g, Variant v);
bool irreflexive(std::span<const int> g);
bool symmetric(std::span<const int> g, Variant v);
bool asymmetric(std::span<const int> g);
bool idempotent(std::span<const int> g, Variant v);
bool anti_idempotent(std::span<const int> g);
bool equivalence(std::span<const int> g, Variant v);
bool representative_system(std::span<const int> g, Variant v);
bool acyclic(std::span<const int> g);
bool check(std::span<const int> g, ConstraintType c, Variant v);
}  // namespace graph

// {"set": [...], "map": {...}} for self-maps, or {"domain": ..., "codomain": ..., "map": {...}}.
MappingInstance instance_from_json(const nlohmann::json& j, std::string_view set_name = "S");
nlohmann::json instance_to_json(const MappingInstance& f);
// "1>2,2>null"
MappingInstance parse_inline_instance(std::string_view text, std::string_view set_name = "S");
std::string format_inline_instance(const MappingInstance& f);

}  // namespace smce
