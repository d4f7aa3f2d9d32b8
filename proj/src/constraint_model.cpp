#include "smce/constraint_model.hpp"

#include <algorithm>
#include <cctype>

#include "smce/errors.hpp"

namespace smce {

namespace {

struct TypeInfo {
  ConstraintType type;
  std::string_view abbrev;
  std::string_view name;
  std::string_view phrase;
};

constexpr std::array<TypeInfo, kConstraintTypeCount> kInfo = {{
    {ConstraintType::Total, "T", "Total", "total"},
    {ConstraintType::DefaultValue, "DV", "DefaultValue", "default"},
    {ConstraintType::NonPrime, "NP", "NonPrime", "non-prime"},
    {ConstraintType::OneToOne, "UK", "OneToOne", "one-to-one"},
    {ConstraintType::Onto, "OT", "Onto", "onto"},
    {ConstraintType::Bijective, "B", "Bijective", "bijective"},
    {ConstraintType::Reflexive, "R", "Reflexive", "reflexive"},
    {ConstraintType::Irreflexive, "IR", "Irreflexive", "irreflexive"},
    {ConstraintType::Symmetric, "S", "Symmetric", "symmetric"},
    {ConstraintType::Asymmetric, "AS", "Asymmetric", "asymmetric"},
    {ConstraintType::Idempotent, "I", "Idempotent", "idempotent"},
    {ConstraintType::Equivalence, "Q", "Equivalence", "equivalence"},
    {ConstraintType::Acyclic, "A", "Acyclic", "acyclic"},
    {ConstraintType::RepresentativeSystemMapping, "RS", "RepresentativeSystemMapping",
     "representative system mapping"},
    {ConstraintType::CanonicalInjection, "CI", "CanonicalInjection", "canonical injection"},
    {ConstraintType::CanonicalProjection, "CP", "CanonicalProjection", "canonical projection"},
    {ConstraintType::SelfMap, "SM", "SelfMap", "self-map"},
}};

const TypeInfo& info(ConstraintType t) noexcept {
  return kInfo[static_cast<std::size_t>(__builtin_ctz(weight(t)))];
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
         });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view abbreviation(ConstraintType t) noexcept { return info(t).abbrev; }
std::string_view display_name(ConstraintType t) noexcept { return info(t).name; }
std::string_view phrase(ConstraintType t) noexcept { return info(t).phrase; }

std::vector<ConstraintType> ConstraintFlags::members() const {
  std::vector<ConstraintType> out;
  for (auto it = kAllConstraintTypes.rbegin(); it != kAllConstraintTypes.rend(); ++it)
    if (contains(*it)) out.push_back(*it);
  return out;
}

ConstraintFlags decode(CombinationCode x) { return decode(static_cast<std::int64_t>(x.value)); }

ConstraintFlags decode(std::int64_t x) {
  if (x < 0 || x > kMaxCombinationCode)
    throw RangeError("combination code out of range: " + std::to_string(x));
  return ConstraintFlags::from_bits(static_cast<std::uint32_t>(x));
}

ConstraintType parse_type(std::string_view abbrev) {
  auto a = trim(abbrev);
  for (const auto& i : kInfo)
    if (iequals(a, i.abbrev) || iequals(a, i.name)) return i.type;
  throw ParseError("unknown constraint abbreviation: '" + std::string(a) + "'");
}

ConstraintFlags parse_flags(std::string_view text) {
  ConstraintFlags out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.insert(parse_type(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_flags(ConstraintFlags f, std::string_view sep) {
  std::string out;
  for (auto t : f.members()) {
    if (!out.empty()) out += sep;
    out += abbreviation(t);
  }
  return out;
}

}  // namespace smce
