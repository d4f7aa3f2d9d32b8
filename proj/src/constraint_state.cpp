#include "smce/constraint_state.hpp"

#include <algorithm>

#include "smce/errors.hpp"

namespace smce {

using nlohmann::json;

ConstraintFlags ConstraintState::all() const {
  ConstraintFlags f;
  for (const auto& m : members) f.insert(m.type);
  return f;
}

ConstraintFlags ConstraintState::asserted() const {
  ConstraintFlags f;
  for (const auto& m : members)
    if (m.provenance == Provenance::Asserted) f.insert(m.type);
  return f;
}

ConstraintFlags ConstraintState::implied() const { return all() - asserted(); }

ConstraintFlags ConstraintState::external() const {
  ConstraintFlags f;
  for (const auto& m : members)
    if (m.provenance == Provenance::Implied && m.via) f.insert(m.type);
  return f;
}

const Member* ConstraintState::find(ConstraintType t) const {
  for (const auto& m : members)
    if (m.type == t) return &m;
  return nullptr;
}

void ConstraintState::set(Member m) {
  for (auto& x : members)
    if (x.type == m.type) {
      x = std::move(m);
      return;
    }
  members.push_back(std::move(m));
  sort();
}

void ConstraintState::sort() {
  std::sort(members.begin(), members.end(),
            [](const Member& a, const Member& b) { return weight(a.type) > weight(b.type); });
}

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::Asserted ? "asserted" : "implied";
}

json state_to_json(const ConstraintState& s) {
  json ms = json::array();
  for (const auto& m : s.members) {
    json j = {{"type", std::string(abbreviation(m.type))}, {"provenance", std::string(to_string(m.provenance))}};
    j["note"] = m.note ? json(*m.note) : json(nullptr);
    j["via"] = m.via ? json(to_int(*m.via)) : json(nullptr);
    ms.push_back(std::move(j));
  }
  return {{"mapping", to_int(s.mapping)}, {"members", std::move(ms)}};
}

ConstraintState state_from_json(const json& j) {
  ConstraintState s(static_cast<MappingId>(j.at("mapping").get<std::int64_t>()));
  for (const auto& m : j.at("members")) {
    Member x{parse_type(m.at("type").get<std::string>()), Provenance::Asserted, std::nullopt, std::nullopt};
    auto p = m.at("provenance").get<std::string>();
    if (p == "asserted")
      x.provenance = Provenance::Asserted;
    else if (p == "implied")
      x.provenance = Provenance::Implied;
    else
      throw ParseError("unknown provenance '" + p + "'");
    if (m.contains("note") && !m.at("note").is_null()) x.note = m.at("note").get<std::string>();
    if (m.contains("via") && !m.at("via").is_null()) x.via = static_cast<MappingId>(m.at("via").get<std::int64_t>());
    if (s.has(x.type)) throw ParseError("duplicate member " + std::string(abbreviation(x.type)));
    s.members.push_back(std::move(x));
  }
  s.sort();
  return s;
}

}  // namespace smce
