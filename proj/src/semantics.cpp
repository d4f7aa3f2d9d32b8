#include "smce/semantics.hpp"

#include <algorithm>
#include <unordered_set>

#include "smce/errors.hpp"

namespace smce {

using nlohmann::json;

FiniteSet::FiniteSet(std::string name, std::vector<ElementId> elements)
    : name_(std::move(name)), elements_(std::move(elements)) {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (!index_.emplace(elements_[i], i).second)
      throw ArgumentError("duplicate element '" + elements_[i] + "' in set " + name_);
}

std::optional<std::size_t> FiniteSet::index_of(const ElementId& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool FiniteSet::same_elements(const FiniteSet& o) const {
  if (size() != o.size()) return false;
  return std::all_of(elements_.begin(), elements_.end(), [&](const ElementId& e) { return o.contains(e); });
}

MappingInstance::MappingInstance(FiniteSet domain, FiniteSet codomain,
                                 const std::vector<std::optional<ElementId>>& images)
    : domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (images.size() != domain_.size())
    throw ArgumentError("mapping graph must assign one value to every domain element");
  graph_.reserve(images.size());
  for (const auto& y : images) {
    if (!y) {
      graph_.push_back(kNull);
      continue;
    }
    auto idx = codomain_.index_of(*y);
    if (!idx) throw ArgumentError("image '" + *y + "' is not in codomain " + codomain_.name());
    graph_.push_back(static_cast<int>(*idx));
  }
}

MappingInstance::MappingInstance(FiniteSet domain, FiniteSet codomain, std::vector<int> graph)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), graph_(std::move(graph)) {
  if (graph_.size() != domain_.size())
    throw ArgumentError("mapping graph must assign one value to every domain element");
  for (int y : graph_)
    if (y != kNull && (y < 0 || static_cast<std::size_t>(y) >= codomain_.size()))
      throw ArgumentError("image index out of codomain range");
}

MappingInstance MappingInstance::self_map(FiniteSet s, std::vector<int> graph) {
  FiniteSet c = s;
  return MappingInstance(std::move(s), std::move(c), std::move(graph));
}

std::optional<ElementId> MappingInstance::at(const ElementId& x) const {
  auto i = domain_.index_of(x);
  if (!i) throw ArgumentError("'" + x + "' is not in domain " + domain_.name());
  int y = graph_[*i];
  if (y == kNull) return std::nullopt;
  return codomain_.elements()[static_cast<std::size_t>(y)];
}

std::vector<int> MappingInstance::self_graph() const {
  if (!is_self_map()) throw CoherenceError("dyadic-type constraints apply only to self-maps");
  std::vector<int> out(graph_.size());
  for (std::size_t i = 0; i < graph_.size(); ++i) {
    int y = graph_[i];
    out[i] = y == kNull ? kNull : static_cast<int>(*domain_.index_of(codomain_.elements()[static_cast<std::size_t>(y)]));
  }
  return out;
}

MappingInstance identity_of(const FiniteSet& s) {
  std::vector<int> g(s.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<int>(i);
  return MappingInstance::self_map(s, std::move(g));
}

std::vector<ElementId> image(const MappingInstance& f) {
  std::vector<bool> hit(f.codomain().size(), false);
  for (int y : f.graph())
    if (y != kNull) hit[static_cast<std::size_t>(y)] = true;
  std::vector<ElementId> out;
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (hit[i]) out.push_back(f.codomain().elements()[i]);
  return out;
}

MappingInstance restrict(const MappingInstance& f, const std::vector<ElementId>& b) {
  std::vector<int> g;
  g.reserve(b.size());
  for (const auto& x : b) {
    auto i = f.domain().index_of(x);
    if (!i) throw ArgumentError("restriction element '" + x + "' is not in domain " + f.domain().name());
    g.push_back(f.graph()[*i]);
  }
  return MappingInstance(FiniteSet(f.domain().name(), b), f.codomain(), std::move(g));
}

MappingInstance compose(const MappingInstance& g, const MappingInstance& f) {
  std::vector<int> out;
  out.reserve(f.graph().size());
  for (int y : f.graph()) {
    if (y == kNull) {
      out.push_back(kNull);
      continue;
    }
    const auto& e = f.codomain().elements()[static_cast<std::size_t>(y)];
    auto i = g.domain().index_of(e);
    if (!i) throw CompositionError("image '" + e + "' of the inner mapping is outside the domain of the outer one");
    out.push_back(g.graph()[*i]);
  }
  return MappingInstance(f.domain(), g.codomain(), std::move(out));
}

Partition kernel_quotient(const MappingInstance& sm) {
  if (!sm.is_self_map()) throw ArgumentError("kernel quotient needs a self-map");
  Partition p;
  std::unordered_map<int, std::size_t> block_of;
  const auto& els = sm.domain().elements();
  for (std::size_t i = 0; i < els.size(); ++i) {
    int y = sm.graph()[i];
    auto [it, fresh] = block_of.emplace(y, p.blocks.size());
    if (fresh) p.blocks.emplace_back();
    p.blocks[it->second].push_back(els[i]);
  }
  return p;
}

namespace graph {

namespace {
inline int at(std::span<const int> g, int x) { return g[static_cast<std::size_t>(x)]; }
}  // namespace

bool total(std::span<const int> g) {
  return std::none_of(g.begin(), g.end(), [](int y) { return y == kNull; });
}

bool one_to_one(std::span<const int> g) {
  std::unordered_set<int> seen;
  for (int y : g)
    if (y != kNull && !seen.insert(y).second) return false;
  return true;
}

bool onto(std::span<const int> g, std::size_t codomain_size) {
  std::vector<bool> hit(codomain_size, false);
  std::size_t count = 0;
  for (int y : g)
    if (y != kNull && !hit[static_cast<std::size_t>(y)]) {
      hit[static_cast<std::size_t>(y)] = true;
      ++count;
    }
  return count == codomain_size;
}

bool reflexive(std::span<const int> g, Variant v) {
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (g[x] == static_cast<int>(x)) continue;
    if (v == Variant::Null && g[x] == kNull) continue;
    return false;
  }
  return true;
}

bool irreflexive(std::span<const int> g) {
  for (std::size_t x = 0; x < g.size(); ++x)
    if (g[x] == static_cast<int>(x)) return false;
  return true;
}

bool symmetric(std::span<const int> g, Variant v) {
  for (std::size_t x = 0; x < g.size(); ++x) {
    int y = g[x];
    if (y == kNull) continue;
    int back = at(g, y);
    if (back == static_cast<int>(x)) continue;
    if (v == Variant::Null && back == kNull) continue;
    return false;
  }
  return true;
}

bool asymmetric(std::span<const int> g) {
  for (std::size_t x = 0; x < g.size(); ++x) {
    int y = g[x];
    if (y != kNull && at(g, y) == static_cast<int>(x)) return false;
  }
  return true;
}

bool idempotent(std::span<const int> g, Variant v) {
  for (int y : g) {
    if (y == kNull) {
      if (v == Variant::Plain) return false;
      continue;
    }
    int z = at(g, y);
    if (z == y) continue;
    if (v == Variant::Null && z == kNull) continue;
    return false;
  }
  return true;
}

bool anti_idempotent(std::span<const int> g) {
  for (int y : g) {
    if (y == kNull) continue;
    int z = at(g, y);
    if (z != kNull && z == y) return false;
  }
  return true;
}

bool equivalence(std::span<const int> g, Variant v) {
  return reflexive(g, v) && symmetric(g, v) && idempotent(g, v);
}

// Kernel reading: every non-null class value is its own representative.
bool representative_system(std::span<const int> g, Variant v) {
  for (int y : g) {
    if (y == kNull) {
      if (v == Variant::Plain) return false;
      continue;
    }
    if (at(g, y) != y) return false;
  }
  return true;
}

bool acyclic(std::span<const int> g) {
  enum : char { Unknown, OnPath, Clear };
  std::vector<char> state(g.size(), Unknown);
  std::vector<int> path;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (state[s] != Unknown) continue;
    path.clear();
    int x = static_cast<int>(s);
    while (x != kNull && state[static_cast<std::size_t>(x)] == Unknown) {
      state[static_cast<std::size_t>(x)] = OnPath;
      path.push_back(x);
      x = at(g, x);
    }
    if (x != kNull && state[static_cast<std::size_t>(x)] == OnPath) return false;
    for (int p : path) state[static_cast<std::size_t>(p)] = Clear;
  }
  return true;
}

bool check(std::span<const int> g, ConstraintType c, Variant v) {
  switch (c) {
    case ConstraintType::Total: return total(g);
    case ConstraintType::OneToOne: return one_to_one(g);
    case ConstraintType::Onto: return onto(g, g.size());
    case ConstraintType::Bijective: return one_to_one(g) && onto(g, g.size());
    case ConstraintType::Reflexive: return reflexive(g, v);
    case ConstraintType::Irreflexive: return irreflexive(g);
    case ConstraintType::Symmetric: return symmetric(g, v);
    case ConstraintType::Asymmetric: return asymmetric(g);
    case ConstraintType::Idempotent: return idempotent(g, v);
    case ConstraintType::Equivalence: return equivalence(g, v);
    case ConstraintType::Acyclic: return acyclic(g);
    case ConstraintType::RepresentativeSystemMapping: return representative_system(g, v);
    default: return true;
  }
}

}  // namespace graph

bool check_constraint(const MappingInstance& f, ConstraintType c, Variant v) {
  if (is_dyadic(c)) return graph::check(f.self_graph(), c, v);
  switch (c) {
    case ConstraintType::Total: return graph::total(f.graph());
    case ConstraintType::OneToOne: return graph::one_to_one(f.graph());
    case ConstraintType::Onto: return graph::onto(f.graph(), f.codomain().size());
    case ConstraintType::Bijective:
      return graph::one_to_one(f.graph()) && graph::onto(f.graph(), f.codomain().size());
    default: return true;
  }
}

ConstraintFlags violations(const MappingInstance& f, ConstraintFlags flags) {
  auto sem = effective_semantics(flags);
  ConstraintFlags out;
  for (auto c : flags.members())
    if (is_checkable(c) && !check_constraint(f, c, sem.variant(c))) out.insert(c);
  return out;
}

bool satisfies_set(const MappingInstance& f, ConstraintFlags flags) { return violations(f, flags).empty(); }

bool is_anti_idempotent(const MappingInstance& sm) { return graph::anti_idempotent(sm.self_graph()); }

// As a binary relation: sm(x) = y and sm(y) = z imply sm(x) = z.
bool is_transitive(const MappingInstance& sm) {
  auto g = sm.self_graph();
  for (int y : g) {
    if (y == kNull) continue;
    int z = g[static_cast<std::size_t>(y)];
    if (z != kNull && z != y) return false;
  }
  return true;
}

namespace {

FiniteSet set_from_json(const json& j, std::string_view fallback_name) {
  if (j.is_array()) return FiniteSet(std::string(fallback_name), j.get<std::vector<ElementId>>());
  if (!j.is_object() || !j.contains("elements")) throw ParseError("set must be an array or {name, elements}");
  return FiniteSet(j.value("name", std::string(fallback_name)), j.at("elements").get<std::vector<ElementId>>());
}

std::string element_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError("element ids must be strings or integers");
}

}  // namespace

MappingInstance instance_from_json(const json& j, std::string_view set_name) {
  try {
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    FiniteSet dom, cod;
    if (j.contains("set")) {
      dom = set_from_json(j.at("set"), set_name);
      cod = dom;
    } else if (j.contains("domain") && j.contains("codomain")) {
      dom = set_from_json(j.at("domain"), "D");
      cod = set_from_json(j.at("codomain"), "C");
    } else {
      throw ParseError("instance needs \"set\" or \"domain\"/\"codomain\"");
    }
    std::vector<std::optional<ElementId>> images(dom.size());
    const auto& m = j.value("map", json::object());
    if (!m.is_object()) throw ParseError("\"map\" must be an object");
    for (const auto& [k, v] : m.items()) {
      auto i = dom.index_of(k);
      if (!i) throw ParseError("map key '" + k + "' is not a domain element");
      if (!v.is_null()) images[*i] = element_text(v);
    }
    return MappingInstance(std::move(dom), std::move(cod), images);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  } catch (const ArgumentError& e) {
    throw ParseError(e.what());
  }
}

json instance_to_json(const MappingInstance& f) {
  json j;
  if (f.domain() == f.codomain()) {
    j["set"] = f.domain().elements();
  } else {
    j["domain"] = {{"name", f.domain().name()}, {"elements", f.domain().elements()}};
    j["codomain"] = {{"name", f.codomain().name()}, {"elements", f.codomain().elements()}};
  }
  json m = json::object();
  for (std::size_t i = 0; i < f.domain().size(); ++i) {
    int y = f.graph()[i];
    m[f.domain().elements()[i]] = y == kNull ? json(nullptr) : json(f.codomain().elements()[static_cast<std::size_t>(y)]);
  }
  j["map"] = std::move(m);
  return j;
}

MappingInstance parse_inline_instance(std::string_view text, std::string_view set_name) {
  std::vector<ElementId> order;
  std::unordered_set<ElementId> seen;
  std::vector<std::pair<ElementId, std::optional<ElementId>>> pairs;
  auto note = [&](const ElementId& e) {
    if (seen.insert(e).second) order.push_back(e);
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    if (!piece.empty()) {
      auto gt = piece.find('>');
      if (gt == std::string_view::npos || gt == 0 || gt + 1 == piece.size())
        throw ParseError("bad instance pair '" + std::string(piece) + "', expected a>b");
      ElementId x(piece.substr(0, gt));
      std::string y(piece.substr(gt + 1));
      for (const auto& p : pairs)
        if (p.first == x) throw ParseError("element '" + x + "' mapped twice");
      note(x);
      if (y == "null") {
        pairs.emplace_back(x, std::nullopt);
      } else {
        note(y);
        pairs.emplace_back(x, y);
      }
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  FiniteSet s(std::string(set_name), order);
  std::vector<std::optional<ElementId>> images(order.size());
  for (const auto& [x, y] : pairs) images[*s.index_of(x)] = y;
  FiniteSet c = s;
  return MappingInstance(std::move(s), std::move(c), images);
}

std::string format_inline_instance(const MappingInstance& f) {
  std::string out;
  for (std::size_t i = 0; i < f.domain().size(); ++i) {
    if (i) out += ',';
    int y = f.graph()[i];
    out += f.domain().elements()[i] + ">" + (y == kNull ? std::string("null") : f.codomain().elements()[static_cast<std::size_t>(y)]);
  }
  return out;
}

}  // namespace smce
