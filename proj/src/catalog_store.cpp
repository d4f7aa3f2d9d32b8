#include "smce/catalog_store.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "smce/errors.hpp"
#include "smce/rule_catalog.hpp"

namespace smce {

using nlohmann::json;

namespace {

constexpr std::string_view kFileSuffix = ".matbase.json";
constexpr int kFormatVersion = 1;

template <class Map, class Id>
const auto& get_or_throw(const Map& m, Id id, const char* what) {
  auto it = m.find(id);
  if (it == m.end()) throw NotFoundError(std::string("unknown ") + what + " " + std::to_string(to_int(id)));
  return it->second;
}

ConstraintState initial_state(const MappingDescriptor& d) {
  ConstraintState s(d.id);
  ConstraintFlags f;
  if (d.system.unity) f = kUnityFlags;
  if (d.is_self_map()) f |= ConstraintType::SelfMap;
  if (d.system.canonical_projection) f |= ConstraintFlags{ConstraintType::CanonicalProjection, ConstraintType::Total};
  if (d.system.canonical_injection)
    f |= ConstraintFlags{ConstraintType::CanonicalInjection, ConstraintType::Total, ConstraintType::OneToOne,
                         ConstraintType::Reflexive, ConstraintType::Idempotent};
  for (auto t : f.members()) s.members.push_back({t, Provenance::Asserted, std::nullopt, std::nullopt});
  return s;
}

}  // namespace

std::string_view to_string(SetType t) noexcept {
  switch (t) {
    case SetType::Entity: return "Entity";
    case SetType::Relationship: return "Relationship";
    case SetType::Value: return "Value";
    case SetType::Calculated: return "Calculated";
    case SetType::System: return "System";
  }
  return "";
}

SetType parse_set_type(std::string_view s) {
  for (auto t : {SetType::Entity, SetType::Relationship, SetType::Value, SetType::Calculated, SetType::System})
    if (to_string(t) == s) return t;
  throw ParseError("unknown set type '" + std::string(s) + "'");
}

std::int64_t Metacatalog::next_id() { return ++last_id_; }

DatabaseId Metacatalog::create_database(std::string name, std::string semantics) {
  if (find_database(name)) throw ConflictError("database '" + name + "' already exists");
  DatabaseRecord d;
  d.id = static_cast<DatabaseId>(next_id());
  d.name = std::move(name);
  d.type = "MatBase";
  d.semantics = std::move(semantics);
  databases_.emplace(d.id, d);
  return d.id;
}

CategoryId Metacatalog::create_category(DatabaseId db, std::string name, std::string semantics) {
  database(db);
  SetCategory c{static_cast<CategoryId>(next_id()), db, std::move(name), false, std::move(semantics)};
  categories_.emplace(c.id, c);
  return c.id;
}

const DatabaseRecord& Metacatalog::database(DatabaseId id) const { return get_or_throw(databases_, id, "database"); }
const SetRecord& Metacatalog::set(SetId id) const { return get_or_throw(sets_, id, "set"); }
const MappingDescriptor& Metacatalog::mapping(MappingId id) const { return get_or_throw(mappings_, id, "mapping"); }
const ConstraintState& Metacatalog::state(MappingId id) const {
  return get_or_throw(states_, id, "constraint set of mapping");
}

std::optional<DatabaseId> Metacatalog::find_database(std::string_view name) const {
  for (const auto& [id, d] : databases_)
    if (d.name == name) return id;
  return std::nullopt;
}

std::optional<SetId> Metacatalog::find_set(DatabaseId db, std::string_view name) const {
  for (const auto& [id, s] : sets_)
    if (s.database == db && s.name == name) return id;
  return std::nullopt;
}

std::optional<MappingId> Metacatalog::find_mapping(DatabaseId db, std::string_view name) const {
  for (const auto& [id, m] : mappings_)
    if (m.database == db && m.name == name) return id;
  return std::nullopt;
}

std::vector<SetId> Metacatalog::sets_of(DatabaseId db) const {
  std::vector<SetId> out;
  for (const auto& [id, s] : sets_)
    if (s.database == db) out.push_back(id);
  return out;
}

std::vector<MappingId> Metacatalog::mappings_of(DatabaseId db) const {
  std::vector<MappingId> out;
  for (const auto& [id, m] : mappings_)
    if (m.database == db) out.push_back(id);
  return out;
}

std::vector<MappingId> Metacatalog::compounds_containing(MappingId member) const {
  std::vector<MappingId> out;
  for (const auto& [id, m] : mappings_)
    if (std::find(m.members.begin(), m.members.end(), member) != m.members.end()) out.push_back(id);
  return out;
}

const MappingInstance* Metacatalog::stored_instance(MappingId id) const {
  auto it = instances_.find(id);
  return it == instances_.end() ? nullptr : &it->second;
}

std::optional<MappingInstance> Metacatalog::instance(MappingId id) const {
  if (auto* s = stored_instance(id)) return *s;
  const auto& d = mapping(id);
  if (!d.is_compound()) return std::nullopt;
  std::optional<MappingInstance> acc;
  for (auto it = d.members.rbegin(); it != d.members.rend(); ++it) {
    auto* m = stored_instance(*it);
    if (!m) return std::nullopt;
    acc = acc ? compose(*m, *acc) : *m;
  }
  return acc;
}

void Metacatalog::put_instance(MappingId id, MappingInstance inst) {
  const auto& d = mapping(id);
  if (d.system.unity) throw ReadOnlyError("unity mapping " + d.name + " is read-only");
  const auto& dom = set(d.domain);
  const auto& cod = set(d.codomain);
  if (d.is_self_map() && !inst.is_self_map())
    throw ArgumentError("instance of self-map " + d.name + " must have equal domain and codomain");
  FiniteSet dset(dom.name, inst.domain().elements());
  FiniteSet cset(cod.name, inst.codomain().elements());
  std::vector<int> g(inst.graph().begin(), inst.graph().end());
  instances_[id] = MappingInstance(std::move(dset), std::move(cset), std::move(g));
}

void Metacatalog::erase_instance(MappingId id) { instances_.erase(id); }

void Metacatalog::set_state(ConstraintState s) {
  mapping(s.mapping);
  s.sort();
  states_[s.mapping] = std::move(s);
}

void Metacatalog::set_descriptor(MappingDescriptor d) {
  const auto& old = mapping(d.id);
  if (old.system.unity) throw ReadOnlyError("unity mapping " + old.name + " is read-only");
  mappings_[d.id] = std::move(d);
}

SetRecord register_set(Metacatalog& meta, std::string name, DatabaseId db, SetType type,
                       std::optional<CategoryId> category) {
  if (!meta.databases_.count(db)) throw IntegrityError("unknown database " + std::to_string(to_int(db)));
  if (meta.find_set(db, name)) throw ConflictError("set '" + name + "' already exists in this database");
  if (category) {
    auto it = meta.categories_.find(*category);
    if (it == meta.categories_.end() || it->second.database != db)
      throw IntegrityError("unknown set category " + std::to_string(to_int(*category)));
  }
  SetRecord s;
  s.id = static_cast<SetId>(meta.next_id());
  s.name = std::move(name);
  s.database = db;
  s.category = category;
  s.type = type;
  MappingDescriptor u;
  u.id = static_cast<MappingId>(meta.next_id());
  u.name = "1_" + s.name;
  u.database = db;
  u.domain = u.codomain = s.id;
  u.system.unity = true;
  s.unity = u.id;
  meta.sets_.emplace(s.id, s);
  meta.states_.emplace(u.id, initial_state(u));
  meta.mappings_.emplace(u.id, std::move(u));
  return s;
}

MappingDescriptor register_mapping(Metacatalog& meta, std::string name, SetId domain, SetId codomain,
                                   std::vector<MappingId> members, const MappingOptions& opts) {
  const auto& dom = meta.set(domain);
  const auto& cod = meta.set(codomain);
  if (dom.database != cod.database) throw IntegrityError("domain and codomain belong to different databases");
  if (meta.find_mapping(dom.database, name))
    throw ConflictError("mapping '" + name + "' already exists in this database");
  if (members.size() == 1) throw ArgumentError("a compound mapping needs at least two members");
  MappingDescriptor d;
  d.name = std::move(name);
  d.database = dom.database;
  d.domain = domain;
  d.codomain = codomain;
  d.inclusion = opts.inclusion || opts.canonical_injection;
  d.system.canonical_projection = opts.canonical_projection;
  d.system.canonical_injection = opts.canonical_injection;
  d.arity = opts.arity;
  d.annotations = opts.annotations;
  if (!members.empty()) {
    for (auto m : members) {
      const auto& md = meta.mapping(m);
      if (md.is_compound()) throw CompositionError("compound members must be atomic mappings: " + md.name);
      if (md.database != d.database) throw CompositionError("member " + md.name + " belongs to another database");
    }
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
      const auto& outer = meta.mapping(members[i]);
      const auto& inner = meta.mapping(members[i + 1]);
      if (inner.codomain != outer.domain)
        throw CompositionError("cannot compose " + outer.name + " after " + inner.name +
                               ": codomain and domain differ");
    }
    if (meta.mapping(members.back()).domain != domain || meta.mapping(members.front()).codomain != codomain)
      throw CompositionError("compound domain/codomain must match its first and last members");
  }
  if (d.is_self_map() && d.system.canonical_projection)
    throw CoherenceError("a canonical projection cannot be a self-map (" + std::string(render_note("A.6.1.1 (ix)")) +
                         ")");
  if (d.system.canonical_projection && d.system.canonical_injection)
    throw CoherenceError("a mapping cannot be both a canonical projection and a canonical injection");
  d.members = std::move(members);
  d.id = static_cast<MappingId>(meta.next_id());
  meta.states_.emplace(d.id, initial_state(d));
  meta.mappings_.emplace(d.id, d);
  return d;
}

void erase_mapping(Metacatalog& meta, MappingId id) {
  const auto& d = meta.mapping(id);
  if (d.system.unity) throw ReadOnlyError("unity mapping " + d.name + " cannot be deleted");
  auto compounds = meta.compounds_containing(id);
  compounds.push_back(id);
  for (auto c : compounds) {
    meta.mappings_.erase(c);
    meta.states_.erase(c);
    meta.instances_.erase(c);
  }
  for (auto& [mid, st] : meta.states_) {
    std::erase_if(st.members, [&](const Member& m) {
      return m.via && std::find(compounds.begin(), compounds.end(), *m.via) != compounds.end();
    });
  }
}

void validate(const Metacatalog& meta) {
  auto fail = [](const std::string& s) { throw IntegrityError(s); };
  auto sid = [](auto id) { return std::to_string(to_int(id)); };
  for (const auto& [id, c] : meta.categories())
    if (!meta.databases().count(c.database)) fail("set category " + sid(id) + " references missing database " + sid(c.database));
  std::set<std::pair<DatabaseId, std::string>> names;
  for (const auto& [id, s] : meta.sets()) {
    if (!meta.databases().count(s.database)) fail("set " + s.name + " references missing database " + sid(s.database));
    if (s.category) {
      auto it = meta.categories().find(*s.category);
      if (it == meta.categories().end() || it->second.database != s.database)
        fail("set " + s.name + " references missing category " + sid(*s.category));
    }
    if (!names.emplace(s.database, s.name).second) fail("duplicate set name " + s.name);
    auto u = meta.mappings().find(s.unity);
    if (u == meta.mappings().end() || !u->second.system.unity || u->second.domain != id || u->second.codomain != id)
      fail("set " + s.name + " references missing unity mapping " + sid(s.unity));
  }
  std::map<SetId, int> unity_count;
  names.clear();
  for (const auto& [id, m] : meta.mappings()) {
    if (!meta.databases().count(m.database)) fail("mapping " + m.name + " references missing database " + sid(m.database));
    auto dom = meta.sets().find(m.domain);
    if (dom == meta.sets().end()) fail("mapping " + m.name + " references missing domain set " + sid(m.domain));
    auto cod = meta.sets().find(m.codomain);
    if (cod == meta.sets().end()) fail("mapping " + m.name + " references missing codomain set " + sid(m.codomain));
    if (dom->second.database != m.database || cod->second.database != m.database)
      fail("mapping " + m.name + " spans databases");
    if (!names.emplace(m.database, m.name).second) fail("duplicate mapping name " + m.name);
    if (m.system.unity) {
      ++unity_count[m.domain];
      if (m.domain != m.codomain) fail("unity mapping " + m.name + " is not a self-map");
    }
    if (m.members.size() == 1) fail("compound " + m.name + " has a single member");
    for (std::size_t i = 0; i < m.members.size(); ++i) {
      auto it = meta.mappings().find(m.members[i]);
      if (it == meta.mappings().end()) fail("compound " + m.name + " references missing member " + sid(m.members[i]));
      if (it->second.is_compound()) fail("compound " + m.name + " has a compound member");
      if (i > 0 && meta.mappings().count(m.members[i - 1]) &&
          it->second.codomain != meta.mappings().at(m.members[i - 1]).domain)
        fail("compound " + m.name + " has a broken chain");
    }
    if (m.is_compound() && (meta.mappings().at(m.members.back()).domain != m.domain ||
                            meta.mappings().at(m.members.front()).codomain != m.codomain))
      fail("compound " + m.name + " domain/codomain do not match its members");
    auto st = meta.states().find(id);
    if (st == meta.states().end()) fail("mapping " + m.name + " has no constraint set");
    auto all = st->second.all();
    if (all.contains(ConstraintType::SelfMap) != m.is_self_map()) fail("mapping " + m.name + " self-map flag disagrees with its domain/codomain");
    if (m.system.unity && all != kUnityFlags) fail("unity mapping " + m.name + " has altered flags");
  }
  for (const auto& [id, s] : meta.sets())
    if (unity_count[id] != 1) fail("set " + s.name + " must own exactly one unity mapping");
  for (const auto& [id, s] : meta.states()) {
    if (!meta.mappings().count(id)) fail("constraint set references missing mapping " + sid(id));
    for (const auto& m : s.members)
      if (m.via && !meta.mappings().count(*m.via)) fail("constraint set of " + sid(id) + " references missing compound " + sid(*m.via));
  }
  for (const auto& [id, inst] : meta.instances()) {
    (void)inst;
    if (!meta.mappings().count(id)) fail("instance references missing mapping " + sid(id));
  }
}

json set_to_json(const SetRecord& s) {
  json j = {{"id", to_int(s.id)},         {"name", s.name},          {"database", to_int(s.database)},
            {"type", std::string(to_string(s.type))}, {"cardinal", s.cardinal}, {"static", s.is_static},
            {"annotations", s.annotations}, {"unity", to_int(s.unity)}};
  j["category"] = s.category ? json(to_int(*s.category)) : json(nullptr);
  return j;
}

json mapping_to_json(const Metacatalog&, const MappingDescriptor& m) {
  json members = json::array();
  for (auto x : m.members) members.push_back(to_int(x));
  return {{"id", to_int(m.id)},
          {"name", m.name},
          {"database", to_int(m.database)},
          {"domain", to_int(m.domain)},
          {"codomain", to_int(m.codomain)},
          {"inclusion", m.inclusion},
          {"is_self_map", m.is_self_map()},
          {"is_compound", m.is_compound()},
          {"members", std::move(members)},
          {"system",
           {{"canonical_projection", m.system.canonical_projection},
            {"canonical_injection", m.system.canonical_injection},
            {"unity", m.system.unity}}},
          {"arity", m.arity},
          {"annotations", m.annotations}};
}

json database_to_json(const Metacatalog& meta, DatabaseId db) {
  const auto& d = meta.database(db);
  json doc;
  doc["format"] = kFormatVersion;
  doc["database"] = {{"id", to_int(d.id)},     {"name", d.name},           {"path", d.path},
                     {"type", d.type},         {"system", d.system},       {"semantics", d.semantics},
                     {"annotations", d.annotations}};
  json cats = json::array();
  for (const auto& [id, c] : meta.categories())
    if (c.database == db)
      cats.push_back({{"id", to_int(id)}, {"name", c.name}, {"system", c.system}, {"semantics", c.semantics}});
  doc["set_categories"] = std::move(cats);
  json sets = json::array();
  for (auto id : meta.sets_of(db)) sets.push_back(set_to_json(meta.set(id)));
  doc["sets"] = std::move(sets);
  json maps = json::array(), states = json::array(), insts = json::array();
  for (auto id : meta.mappings_of(db)) {
    maps.push_back(mapping_to_json(meta, meta.mapping(id)));
    states.push_back(state_to_json(meta.state(id)));
    if (auto* i = meta.stored_instance(id)) insts.push_back({{"mapping", to_int(id)}, {"instance", instance_to_json(*i)}});
  }
  doc["mappings"] = std::move(maps);
  doc["constraint_sets"] = std::move(states);
  doc["instances"] = std::move(insts);
  return doc;
}

void load_database(Metacatalog& meta, const json& doc) {
  try {
    if (doc.value("format", 0) != kFormatVersion) throw ParseError("unsupported metacatalog format");
    auto bump = [&](std::int64_t id) {
      if (id <= 0) throw IntegrityError("ids must be positive");
      meta.last_id_ = std::max(meta.last_id_, id);
      return id;
    };
    auto taken = [&](std::int64_t id) {
      auto mid = static_cast<MappingId>(id);
      return meta.databases_.count(static_cast<DatabaseId>(id)) || meta.categories_.count(static_cast<CategoryId>(id)) ||
             meta.sets_.count(static_cast<SetId>(id)) || meta.mappings_.count(mid);
    };
    auto fresh = [&](std::int64_t id) {
      if (taken(id)) throw IntegrityError("duplicate id " + std::to_string(id));
      return bump(id);
    };
    const auto& jd = doc.at("database");
    DatabaseRecord d;
    d.id = static_cast<DatabaseId>(fresh(jd.at("id").get<std::int64_t>()));
    d.name = jd.at("name").get<std::string>();
    d.path = jd.value("path", "");
    d.type = jd.value("type", "");
    d.system = jd.value("system", false);
    d.semantics = jd.value("semantics", "");
    d.annotations = jd.value("annotations", "");
    if (meta.find_database(d.name)) throw IntegrityError("duplicate database name " + d.name);
    meta.databases_.emplace(d.id, d);
    for (const auto& jc : doc.at("set_categories")) {
      SetCategory c{static_cast<CategoryId>(fresh(jc.at("id").get<std::int64_t>())), d.id,
                    jc.at("name").get<std::string>(), jc.value("system", false), jc.value("semantics", "")};
      meta.categories_.emplace(c.id, c);
    }
    for (const auto& js : doc.at("sets")) {
      SetRecord s;
      s.id = static_cast<SetId>(fresh(js.at("id").get<std::int64_t>()));
      s.name = js.at("name").get<std::string>();
      s.database = static_cast<DatabaseId>(js.at("database").get<std::int64_t>());
      if (!js.at("category").is_null()) s.category = static_cast<CategoryId>(js.at("category").get<std::int64_t>());
      s.type = parse_set_type(js.at("type").get<std::string>());
      s.cardinal = js.value("cardinal", std::int64_t{0});
      s.is_static = js.value("static", false);
      s.annotations = js.value("annotations", "");
      s.unity = static_cast<MappingId>(js.at("unity").get<std::int64_t>());
      meta.sets_.emplace(s.id, s);
    }
    for (const auto& jm : doc.at("mappings")) {
      MappingDescriptor m;
      m.id = static_cast<MappingId>(fresh(jm.at("id").get<std::int64_t>()));
      m.name = jm.at("name").get<std::string>();
      m.database = static_cast<DatabaseId>(jm.at("database").get<std::int64_t>());
      m.domain = static_cast<SetId>(jm.at("domain").get<std::int64_t>());
      m.codomain = static_cast<SetId>(jm.at("codomain").get<std::int64_t>());
      m.inclusion = jm.value("inclusion", false);
      for (const auto& x : jm.at("members")) m.members.push_back(static_cast<MappingId>(x.get<std::int64_t>()));
      const auto& sys = jm.at("system");
      m.system.canonical_projection = sys.value("canonical_projection", false);
      m.system.canonical_injection = sys.value("canonical_injection", false);
      m.system.unity = sys.value("unity", false);
      m.arity = jm.value("arity", 1);
      m.annotations = jm.value("annotations", "");
      if (jm.contains("is_self_map") && jm.at("is_self_map").get<bool>() != m.is_self_map())
        throw IntegrityError("mapping " + m.name + " stored is_self_map disagrees with its domain/codomain");
      meta.mappings_.emplace(m.id, m);
    }
    for (const auto& js : doc.at("constraint_sets")) {
      auto s = state_from_json(js);
      if (!meta.mappings_.count(s.mapping))
        throw IntegrityError("constraint set references missing mapping " + std::to_string(to_int(s.mapping)));
      meta.states_[s.mapping] = std::move(s);
    }
    for (const auto& ji : doc.at("instances")) {
      auto id = static_cast<MappingId>(ji.at("mapping").get<std::int64_t>());
      if (!meta.mappings_.count(id)) throw IntegrityError("instance references missing mapping " + std::to_string(to_int(id)));
      meta.instances_[id] = instance_from_json(ji.at("instance"));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed metacatalog: ") + e.what());
  }
}

std::string database_file_name(const DatabaseRecord& db) { return db.name + std::string(kFileSuffix); }

void save(const Metacatalog& meta, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [id, d] : meta.databases()) {
    auto path = dir / database_file_name(d);
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write " + tmp.string());
      out << database_to_json(meta, id).dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
  }
}

namespace {

void load_file(Metacatalog& meta, const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(p.string() + ": " + e.what());
  }
  load_database(meta, doc);
}

bool is_db_file(const std::filesystem::path& p) {
  auto n = p.filename().string();
  return n.size() > kFileSuffix.size() && n.ends_with(kFileSuffix);
}

}  // namespace

Metacatalog load(const std::filesystem::path& path) {
  Metacatalog meta;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(path))
      if (e.is_regular_file() && is_db_file(e.path())) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) load_file(meta, f);
  } else {
    load_file(meta, path);
  }
  validate(meta);
  return meta;
}

}  // namespace smce
