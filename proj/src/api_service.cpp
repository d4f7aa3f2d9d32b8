#include "smce/api_service.hpp"

#include <cstdlib>
#include <sstream>

#include <httplib.h>

#include "smce/errors.hpp"

namespace smce {

using nlohmann::json;

namespace {

ApiResponse reply(int status, const json& j) { return {status, j.dump(2), "application/json"}; }

ApiResponse error(int status, std::string_view kind, const std::string& message) {
  return reply(status, {{"error", std::string(kind)}, {"message", message}});
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : path) {
    if (ch == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

std::optional<std::int64_t> parse_int(const std::string& s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  std::int64_t v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return std::nullopt;
    v = v * 10 + (ch - '0');
  }
  return v;
}

DatabaseId resolve_db(const Metacatalog& meta, const std::string& key) {
  if (auto n = parse_int(key)) {
    auto id = static_cast<DatabaseId>(*n);
    if (meta.databases().count(id)) return id;
  }
  if (auto id = meta.find_database(key)) return *id;
  throw NotFoundError("unknown database " + key);
}

MappingId resolve_mapping(const Metacatalog& meta, const std::string& key) {
  auto n = parse_int(key);
  if (!n) throw NotFoundError("unknown mapping " + key);
  auto id = static_cast<MappingId>(*n);
  meta.mapping(id);
  return id;
}

SetId resolve_set(const Metacatalog& meta, DatabaseId db, const json& key) {
  if (key.is_number_integer()) {
    auto id = static_cast<SetId>(key.get<std::int64_t>());
    if (meta.set(id).database != db) throw NotFoundError("set " + key.dump() + " is not in this database");
    return id;
  }
  auto name = key.get<std::string>();
  if (auto id = meta.find_set(db, name)) return *id;
  throw NotFoundError("unknown set " + name);
}

json mapping_view(const Metacatalog& meta, const MappingDescriptor& m) {
  auto j = mapping_to_json(meta, m);
  j["domain_name"] = meta.set(m.domain).name;
  j["codomain_name"] = meta.set(m.codomain).name;
  json names = json::array();
  for (auto x : m.members) names.push_back(meta.mapping(x).name);
  j["member_names"] = std::move(names);
  j["has_instance"] = meta.instance(m.id).has_value();
  return j;
}

json toggle_view(const Metacatalog& meta, MappingId id, const ToggleResult& r) {
  json outcomes = json::array();
  for (const auto& o : r.outcomes) {
    auto j = outcome_to_json(o);
    j["name"] = meta.mappings().count(o.state.mapping) ? meta.mapping(o.state.mapping).name : "";
    outcomes.push_back(std::move(j));
  }
  json plans = json::array();
  for (const auto& p : r.plans) plans.push_back(plan_to_json(p));
  json j = {{"status", std::string(to_string(r.status))},
            {"message", r.message},
            {"noop", r.noop},
            {"unchecked", r.unchecked},
            {"outcomes", std::move(outcomes)},
            {"plans", std::move(plans)},
            {"state", constraint_state_view(meta, id)}};
  if (r.note) {
    j["note"] = *r.note;
    j["description"] = find_corollary(*r.note).description;
  } else {
    j["note"] = nullptr;
  }
  return j;
}

const json& body_field(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) throw ArgumentError(std::string("missing field '") + key + "'");
  return body.at(key);
}

}  // namespace

json constraint_state_view(const Metacatalog& meta, MappingId id) {
  const auto& d = meta.mapping(id);
  const auto& s = meta.state(id);
  json flags = json::object();
  for (auto t : kAllConstraintTypes) {
    const auto* m = s.find(t);
    flags[std::string(abbreviation(t))] = m ? std::string(to_string(m->provenance)) : "off";
  }
  json members = json::array();
  for (const auto& m : s.members) {
    json j = {{"type", std::string(abbreviation(m.type))}, {"provenance", std::string(to_string(m.provenance))}};
    if (m.note && !m.note->empty()) {
      j["note"] = *m.note;
      j["description"] = find_corollary(*m.note).description;
    } else {
      j["note"] = nullptr;
    }
    j["via"] = m.via ? json(meta.mappings().count(*m.via) ? meta.mapping(*m.via).name : std::to_string(to_int(*m.via)))
                     : json(nullptr);
    members.push_back(std::move(j));
  }
  json v = {{"mapping", to_int(id)},
            {"name", d.name},
            {"read_only", d.system.unity},
            {"code", encode(s.all()).value},
            {"flags", std::move(flags)},
            {"members", std::move(members)}};
  auto inst = meta.instance(id);
  if (inst) {
    auto bad = violations(*inst, s.all());
    json vs = json::array();
    for (auto t : bad.members()) vs.push_back(std::string(abbreviation(t)));
    v["satisfied"] = bad.empty();
    v["violations"] = std::move(vs);
  } else {
    v["satisfied"] = nullptr;
    v["violations"] = json::array();
  }
  return v;
}

ApiConfig resolve_config(std::optional<int> port, std::optional<std::string> data_dir,
                         std::optional<std::string> ui_dir) {
  ApiConfig c;
  if (port) {
    c.port = *port;
  } else if (const char* e = std::getenv("SMCE_PORT")) {
    auto n = parse_int(e);
    if (!n || *n > 65535) throw ArgumentError(std::string("invalid SMCE_PORT '") + e + "'");
    c.port = static_cast<int>(*n);
  }
  if (data_dir)
    c.data_dir = *data_dir;
  else if (const char* e = std::getenv("SMCE_DATA"))
    c.data_dir = e;
  if (ui_dir) c.ui_dir = *ui_dir;
  return c;
}

ApiService::ApiService(Metacatalog meta, const RuleCatalog& cat, std::optional<std::filesystem::path> data_dir)
    : cat_(cat), data_dir_(std::move(data_dir)), meta_(std::make_shared<const Metacatalog>(std::move(meta))) {}

ApiService ApiService::open(const std::filesystem::path& data_dir, const RuleCatalog& cat) {
  Metacatalog meta;
  if (std::filesystem::exists(data_dir)) meta = load(data_dir);
  return ApiService(std::move(meta), cat, data_dir);
}

std::shared_ptr<const Metacatalog> ApiService::snapshot() const {
  std::lock_guard lk(snapshot_mu_);
  return meta_;
}

template <class Fn>
ApiResponse ApiService::mutate(Fn&& fn) {
  std::lock_guard wl(writer_mu_);
  auto work = std::make_shared<Metacatalog>(*snapshot());
  auto [commit, resp] = fn(*work);
  if (commit) {
    if (data_dir_) save(*work, *data_dir_);
    std::lock_guard lk(snapshot_mu_);
    meta_ = std::move(work);
  }
  return resp;
}

ApiResponse ApiService::handle(std::string_view method, std::string_view path,
                               const std::map<std::string, std::string>& query, std::string_view body) {
  try {
    auto parts = split_path(path);
    if (method == "GET") return get(parts, query);
    json j = body.empty() ? json::object() : json::parse(body);
    if (method == "POST") return post(parts, j);
    if (method == "PUT") return put(parts, j);
    if (method == "DELETE") return del(parts);
    return error(405, "MethodNotAllowed", "unsupported method " + std::string(method));
  } catch (const json::parse_error& e) {
    return error(400, "ParseError", e.what());
  } catch (const json::exception& e) {
    return error(400, "ParseError", e.what());
  } catch (const NotFoundError& e) {
    return error(404, "NotFound", e.what());
  } catch (const ReadOnlyError& e) {
    return error(403, "ReadOnly", e.what());
  } catch (const ConflictError& e) {
    return error(409, "Conflict", e.what());
  } catch (const CoherenceError& e) {
    return error(409, "Coherence", e.what());
  } catch (const CompositionError& e) {
    return error(400, "Composition", e.what());
  } catch (const IntegrityError& e) {
    return error(400, "Integrity", e.what());
  } catch (const ParseError& e) {
    return error(400, "ParseError", e.what());
  } catch (const ArgumentError& e) {
    return error(400, "Argument", e.what());
  } catch (const RangeError& e) {
    return error(400, "Range", e.what());
  } catch (const std::exception& e) {
    return error(500, "Internal", e.what());
  }
}

ApiResponse ApiService::get(const std::vector<std::string>& p, const std::map<std::string, std::string>& query) {
  auto meta = snapshot();
  const auto& m = *meta;
  if (p.size() == 1 && p[0] == "dbs") {
    json a = json::array();
    for (const auto& [id, d] : m.databases())
      a.push_back({{"id", to_int(id)}, {"name", d.name}, {"semantics", d.semantics}});
    return reply(200, a);
  }
  if (p.size() == 3 && p[0] == "dbs" && p[2] == "sets") {
    auto db = resolve_db(m, p[1]);
    json a = json::array();
    for (auto id : m.sets_of(db)) a.push_back(set_to_json(m.set(id)));
    return reply(200, a);
  }
  if (p.size() == 3 && p[0] == "dbs" && p[2] == "mappings") {
    auto db = resolve_db(m, p[1]);
    json a = json::array();
    for (auto id : m.mappings_of(db)) {
      auto j = mapping_view(m, m.mapping(id));
      j["state"] = constraint_state_view(m, id);
      a.push_back(std::move(j));
    }
    return reply(200, a);
  }
  if (p.size() == 2 && p[0] == "mappings") {
    auto id = resolve_mapping(m, p[1]);
    auto j = mapping_view(m, m.mapping(id));
    j["state"] = constraint_state_view(m, id);
    return reply(200, j);
  }
  if (p.size() == 3 && p[0] == "mappings" && p[2] == "constraints")
    return reply(200, constraint_state_view(m, resolve_mapping(m, p[1])));
  if (p.size() == 3 && p[0] == "mappings" && p[2] == "instance") {
    auto id = resolve_mapping(m, p[1]);
    auto inst = m.instance(id);
    if (!inst) throw NotFoundError("mapping " + m.mapping(id).name + " has no instance");
    json j = instance_to_json(*inst);
    j["stored"] = m.stored_instance(id) != nullptr;
    j["inline"] = format_inline_instance(*inst);
    return reply(200, j);
  }
  if (p.size() == 2 && p[0] == "catalog" && p[1] == "verdict") {
    auto it = query.find("flags");
    auto flags = parse_flags(it == query.end() ? "" : it->second);
    auto c = query.count("compound") && query.at("compound") != "false" ? Compoundness::Compound : Compoundness::Single;
    auto v = lookup(cat_, encode(flags), c);
    auto j = verdict_to_json(v);
    j["code"] = encode(flags).value;
    j["flags"] = format_flags(flags);
    return reply(200, j);
  }
  if (p.size() == 2 && p[0] == "catalog" && p[1] == "export.json") return reply(200, catalog_to_json(cat_));
  if (p.size() == 2 && p[0] == "catalog" && p[1] == "export.csv") {
    auto it = query.find("table");
    std::string table = it == query.end() ? "coherencies" : it->second;
    std::ostringstream os;
    if (table == "corollaries")
      write_corollaries_csv(os, cat_);
    else if (table == "coherencies")
      write_coherencies_csv(os, cat_);
    else if (table == "redundancies")
      write_redundancies_csv(os, cat_);
    else
      throw ArgumentError("unknown table '" + table + "'");
    return {200, os.str(), "text/csv"};
  }
  throw NotFoundError("no route GET /" + (p.empty() ? std::string() : p[0]));
}

ApiResponse ApiService::post(const std::vector<std::string>& p, const json& body) {
  if (p.size() == 3 && p[0] == "mappings" && (p[2] == "toggle" || p[2] == "constraints")) {
    auto type = parse_type(body_field(body, "type").get<std::string>());
    bool desired;
    if (p[2] == "toggle") {
      desired = body_field(body, "desired").get<bool>();
    } else {
      auto action = body.value("action", std::string("add"));
      if (action != "add" && action != "remove") throw ArgumentError("action must be add or remove");
      desired = action == "add";
    }
    return mutate([&](Metacatalog& m) {
      auto id = resolve_mapping(m, p[1]);
      auto r = toggle_constraint(m, id, type, desired, cat_);
      return std::pair{r.accepted() && !r.noop, reply(r.accepted() ? 200 : 409, toggle_view(m, id, r))};
    });
  }
  if (p.size() == 3 && p[0] == "mappings" && p[2] == "retype") {
    RetypeRequest req;
    if (body.contains("inclusion")) req.inclusion = body.at("inclusion").get<bool>();
    if (body.contains("canonical_projection")) req.canonical_projection = body.at("canonical_projection").get<bool>();
    if (body.contains("canonical_injection")) req.canonical_injection = body.at("canonical_injection").get<bool>();
    return mutate([&](Metacatalog& m) {
      auto id = resolve_mapping(m, p[1]);
      auto r = retype_mapping(m, id, req, cat_);
      return std::pair{r.accepted(), reply(r.accepted() ? 200 : 409, toggle_view(m, id, r))};
    });
  }
  if (p.size() == 1 && p[0] == "dbs") {
    auto name = body_field(body, "name").get<std::string>();
    return mutate([&](Metacatalog& m) {
      auto id = m.create_database(name, body.value("semantics", ""));
      return std::pair{true, reply(201, {{"id", to_int(id)}, {"name", name}})};
    });
  }
  if (p.size() == 3 && p[0] == "dbs" && p[2] == "sets") {
    auto name = body_field(body, "name").get<std::string>();
    auto type = parse_set_type(body.value("type", "Entity"));
    return mutate([&](Metacatalog& m) {
      auto db = resolve_db(m, p[1]);
      auto s = register_set(m, name, db, type);
      return std::pair{true, reply(201, set_to_json(s))};
    });
  }
  if (p.size() == 3 && p[0] == "dbs" && p[2] == "mappings") {
    auto name = body_field(body, "name").get<std::string>();
    return mutate([&](Metacatalog& m) {
      auto db = resolve_db(m, p[1]);
      MappingOptions opts;
      opts.inclusion = body.value("inclusion", false);
      opts.canonical_projection = body.value("canonical_projection", false);
      opts.canonical_injection = body.value("canonical_injection", false);
      std::vector<MappingId> members;
      if (body.contains("members"))
        for (const auto& x : body.at("members")) {
          if (x.is_number_integer()) {
            members.push_back(resolve_mapping(m, std::to_string(x.get<std::int64_t>())));
          } else {
            auto id = m.find_mapping(db, x.get<std::string>());
            if (!id) throw NotFoundError("unknown mapping " + x.get<std::string>());
            members.push_back(*id);
          }
        }
      auto d = register_mapping(m, name, resolve_set(m, db, body_field(body, "domain")),
                                resolve_set(m, db, body_field(body, "codomain")), std::move(members), opts);
      return std::pair{true, reply(201, mapping_view(m, d))};
    });
  }
  throw NotFoundError("no route POST /" + (p.empty() ? std::string() : p[0]));
}

ApiResponse ApiService::put(const std::vector<std::string>& p, const json& body) {
  if (p.size() == 3 && p[0] == "mappings" && p[2] == "instance") {
    return mutate([&](Metacatalog& m) {
      auto id = resolve_mapping(m, p[1]);
      const auto& d = m.mapping(id);
      auto inst = body.contains("inline") ? parse_inline_instance(body.at("inline").get<std::string>(), m.set(d.domain).name)
                                          : instance_from_json(body, m.set(d.domain).name);
      m.put_instance(id, std::move(inst));
      return std::pair{true, reply(200, constraint_state_view(m, id))};
    });
  }
  throw NotFoundError("no route PUT /" + (p.empty() ? std::string() : p[0]));
}

ApiResponse ApiService::del(const std::vector<std::string>& p) {
  if (p.size() == 2 && p[0] == "mappings") {
    return mutate([&](Metacatalog& m) {
      auto id = resolve_mapping(m, p[1]);
      auto out = delete_mapping(m, id, cat_);
      json changed = json::array();
      for (const auto& o : out) changed.push_back(outcome_to_json(o));
      return std::pair{true, reply(200, {{"deleted", to_int(id)}, {"outcomes", std::move(changed)}})};
    });
  }
  if (p.size() == 3 && p[0] == "mappings" && p[2] == "instance") {
    return mutate([&](Metacatalog& m) {
      auto id = resolve_mapping(m, p[1]);
      if (m.mapping(id).system.unity) throw ReadOnlyError("unity mapping " + m.mapping(id).name + " is read-only");
      m.erase_instance(id);
      return std::pair{true, reply(200, constraint_state_view(m, id))};
    });
  }
  throw NotFoundError("no route DELETE /" + (p.empty() ? std::string() : p[0]));
}

int serve(ApiService& api, const ApiConfig& cfg, std::stop_token stop) {
  httplib::Server srv;
  if (cfg.ui_dir && !srv.set_mount_point("/ui", cfg.ui_dir->string()))
    throw ArgumentError("cannot mount UI directory " + cfg.ui_dir->string());
  auto bridge = [&api](const char* method) {
    return [&api, method](const httplib::Request& req, httplib::Response& res) {
      std::map<std::string, std::string> q;
      for (const auto& [k, v] : req.params) q[k] = v;
      auto r = api.handle(method, req.path, q, req.body);
      res.status = r.status;
      res.set_content(r.body, r.content_type + "; charset=utf-8");
    };
  };
  srv.Get(R"(/(dbs|mappings|catalog)(/.*)?)", bridge("GET"));
  srv.Post(R"(/(dbs|mappings)(/.*)?)", bridge("POST"));
  srv.Put(R"(/mappings/.*)", bridge("PUT"));
  srv.Delete(R"(/mappings/.*)", bridge("DELETE"));
  std::stop_callback on_stop(stop, [&srv] { srv.stop(); });
  if (!srv.listen(cfg.host, cfg.port)) throw Error("cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
  return 0;
}

}  // namespace smce
