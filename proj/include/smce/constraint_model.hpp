#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace smce {

enum class ConstraintType : std::uint32_t {
  Total = 1u << 0,
  DefaultValue = 1u << 1,
  NonPrime = 1u << 2,
  OneToOne = 1u << 3,
  Onto = 1u << 4,
  Bijective = 1u << 5,
  Reflexive = 1u << 6,
  Irreflexive = 1u << 7,
  Symmetric = 1u << 8,
  Asymmetric = 1u << 9,
  Idempotent = 1u << 10,
  Equivalence = 1u << 11,
  Acyclic = 1u << 12,
  RepresentativeSystemMapping = 1u << 13,
  CanonicalInjection = 1u << 14,
  CanonicalProjection = 1u << 15,
  SelfMap = 1u << 16,
};

inline constexpr std::size_t kConstraintTypeCount = 17;
inline constexpr std::uint32_t kMaxCombinationCode = (1u << kConstraintTypeCount) - 1;

// Ascending weight.
inline constexpr std::array<ConstraintType, kConstraintTypeCount> kAllConstraintTypes = {
    ConstraintType::Total,       ConstraintType::DefaultValue, ConstraintType::NonPrime,
    ConstraintType::OneToOne,    ConstraintType::Onto,         ConstraintType::Bijective,
    ConstraintType::Reflexive,   ConstraintType::Irreflexive,  ConstraintType::Symmetric,
    ConstraintType::Asymmetric,  ConstraintType::Idempotent,   ConstraintType::Equivalence,
    ConstraintType::Acyclic,     ConstraintType::RepresentativeSystemMapping,
    ConstraintType::CanonicalInjection, ConstraintType::CanonicalProjection,
    ConstraintType::SelfMap,
};

constexpr std::uint32_t weight(ConstraintType t) noexcept { return static_cast<std::uint32_t>(t); }

constexpr bool is_system(ConstraintType t) noexcept {
  return t == ConstraintType::SelfMap || t == ConstraintType::CanonicalProjection ||
         t == ConstraintType::CanonicalInjection;
}

// Reflexive through RepresentativeSystemMapping.
constexpr bool is_dyadic(ConstraintType t) noexcept {
  return weight(t) >= weight(ConstraintType::Reflexive) &&
         weight(t) <= weight(ConstraintType::RepresentativeSystemMapping);
}

// Instance checks exist for these; the rest are declaration-only.
constexpr bool is_checkable(ConstraintType t) noexcept {
  return !is_system(t) && t != ConstraintType::DefaultValue && t != ConstraintType::NonPrime;
}

constexpr bool has_null_variant(ConstraintType t) noexcept {
  return t == ConstraintType::Reflexive || t == ConstraintType::Symmetric ||
         t == ConstraintType::Idempotent || t == ConstraintType::Equivalence ||
         t == ConstraintType::RepresentativeSystemMapping;
}

std::string_view abbreviation(ConstraintType t) noexcept;
std::string_view display_name(ConstraintType t) noexcept;
// Lower-case noun used in corollary descriptions ("one-to-one").
std::string_view phrase(ConstraintType t) noexcept;

class ConstraintFlags {
 public:
  constexpr ConstraintFlags() = default;
  constexpr ConstraintFlags(ConstraintType t) noexcept : bits_(weight(t)) {}
  constexpr ConstraintFlags(std::initializer_list<ConstraintType> ts) noexcept {
    for (auto t : ts) bits_ |= weight(t);
  }
  static constexpr ConstraintFlags from_bits(std::uint32_t bits) noexcept {
    ConstraintFlags f;
    f.bits_ = bits & kMaxCombinationCode;
    return f;
  }

  constexpr std::uint32_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr bool contains(ConstraintType t) const noexcept { return (bits_ & weight(t)) != 0; }
  constexpr bool contains_all(ConstraintFlags o) const noexcept { return (bits_ & o.bits_) == o.bits_; }
  constexpr bool intersects(ConstraintFlags o) const noexcept { return (bits_ & o.bits_) != 0; }
  int size() const noexcept { return __builtin_popcount(bits_); }

  constexpr ConstraintFlags& insert(ConstraintFlags o) noexcept { bits_ |= o.bits_; return *this; }
  constexpr ConstraintFlags& erase(ConstraintFlags o) noexcept { bits_ &= ~o.bits_; return *this; }

  constexpr ConstraintFlags operator|(ConstraintFlags o) const noexcept { return from_bits(bits_ | o.bits_); }
  constexpr ConstraintFlags operator&(ConstraintFlags o) const noexcept { return from_bits(bits_ & o.bits_); }
  constexpr ConstraintFlags operator-(ConstraintFlags o) const noexcept { return from_bits(bits_ & ~o.bits_); }
  constexpr ConstraintFlags& operator|=(ConstraintFlags o) noexcept { return insert(o); }
  constexpr ConstraintFlags& operator-=(ConstraintFlags o) noexcept { return erase(o); }
  constexpr bool operator==(const ConstraintFlags&) const = default;

  // Members in descending weight, the canonical output order.
  std::vector<ConstraintType> members() const;

 private:
  std::uint32_t bits_ = 0;
};

inline constexpr ConstraintFlags kSystemFlags{ConstraintType::SelfMap, ConstraintType::CanonicalProjection,
                                              ConstraintType::CanonicalInjection};

struct CombinationCode {
  std::uint32_t value = 0;
  constexpr auto operator<=>(const CombinationCode&) const = default;
};

constexpr CombinationCode encode(ConstraintFlags f) noexcept { return {f.bits()}; }
ConstraintFlags decode(CombinationCode x);
ConstraintFlags decode(std::int64_t x);

enum class Variant { Plain, Null };

struct EffectiveSemantics {
  bool total = false;
  Variant variant(ConstraintType t) const noexcept {
    return has_null_variant(t) && !total ? Variant::Null : Variant::Plain;
  }
};

constexpr EffectiveSemantics effective_semantics(ConstraintFlags f) noexcept {
  return {f.contains(ConstraintType::Total)};
}

ConstraintType parse_type(std::string_view abbrev);
ConstraintFlags parse_flags(std::string_view text);
std::string format_flags(ConstraintFlags f, std::string_view sep = ",");

}  // namespace smce
