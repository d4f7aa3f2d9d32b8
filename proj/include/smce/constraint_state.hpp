#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smce/constraint_model.hpp"

namespace smce {

enum class DatabaseId : std::int64_t {};
enum class CategoryId : std::int64_t {};
enum class SetId : std::int64_t {};
enum class MappingId : std::int64_t {};

template <class Id>
constexpr std::int64_t to_int(Id id) noexcept {
  return static_cast<std::int64_t>(id);
}

enum class Provenance { Asserted, Implied };

struct Member {
  ConstraintType type;
  Provenance provenance = Provenance::Asserted;
  std::optional<std::string> note;
  // Compound whose cross-mapping rule implied this member.
  std::optional<MappingId> via;
  bool operator==(const Member&) const = default;
};

class ConstraintState {
 public:
  ConstraintState() = default;
  explicit ConstraintState(MappingId m) : mapping(m) {}

  MappingId mapping{};
  // Descending weight, one entry per type.
  std::vector<Member> members;

  ConstraintFlags all() const;
  ConstraintFlags asserted() const;
  ConstraintFlags implied() const;
  // Implied members carried over from other mappings.
  ConstraintFlags external() const;
  const Member* find(ConstraintType t) const;
  bool has(ConstraintType t) const { return find(t) != nullptr; }

  void set(Member m);
  void sort();

  bool operator==(const ConstraintState&) const = default;
};

std::string_view to_string(Provenance p) noexcept;
nlohmann::json state_to_json(const ConstraintState& s);
ConstraintState state_from_json(const nlohmann::json& j);

}  // namespace smce
