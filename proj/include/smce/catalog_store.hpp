#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smce/constraint_state.hpp"
#include "smce/semantics.hpp"

namespace smce {

enum class SetType { Entity, Relationship, Value, Calculated, System };

std::string_view to_string(SetType t) noexcept;
SetType parse_set_type(std::string_view s);

struct DatabaseRecord {
  DatabaseId id{};
  std::string name;
  std::string path;
  std::string type;
  bool system = false;
  std::string semantics;
  std::string annotations;
  bool operator==(const DatabaseRecord&) const = default;
};

struct SetCategory {
  CategoryId id{};
  DatabaseId database{};
  std::string name;
  bool system = false;
  std::string semantics;
  bool operator==(const SetCategory&) const = default;
};

struct SetRecord {
  SetId id{};
  std::string name;
  DatabaseId database{};
  std::optional<CategoryId> category;
  SetType type = SetType::Entity;
  std::int64_t cardinal = 0;
  bool is_static = false;
  std::string annotations;
  MappingId unity{};
  bool operator==(const SetRecord&) const = default;
};

struct SystemMappingFlags {
  bool canonical_projection = false;
  bool canonical_injection = false;
  bool unity = false;
  bool operator==(const SystemMappingFlags&) const = default;
};

struct MappingDescriptor {
  MappingId id{};
  std::string name;
  DatabaseId database{};
  SetId domain{};
  SetId codomain{};
  // Domain included in codomain (or the converse) though the sets differ.
  bool inclusion = false;
  // Outermost first: members[0] ∘ ... ∘ members[n-1].
  std::vector<MappingId> members;
  SystemMappingFlags system;
  int arity = 1;
  std::string annotations;

  bool is_self_map() const noexcept { return domain == codomain || inclusion; }
  bool is_compound() const noexcept { return members.size() > 1; }
  bool operator==(const MappingDescriptor&) const = default;
};

struct MappingOptions {
  bool canonical_projection = false;
  bool canonical_injection = false;
  bool inclusion = false;
  int arity = 1;
  std::string annotations;
};

// The flags every unity mapping carries.
inline constexpr ConstraintFlags kUnityFlags{
    ConstraintType::SelfMap,   ConstraintType::Total,     ConstraintType::OneToOne,   ConstraintType::Onto,
    ConstraintType::Bijective, ConstraintType::Reflexive, ConstraintType::Symmetric,  ConstraintType::Idempotent,
    ConstraintType::Equivalence, ConstraintType::RepresentativeSystemMapping};

class Metacatalog {
 public:
  DatabaseId create_database(std::string name, std::string semantics = {});
  CategoryId create_category(DatabaseId db, std::string name, std::string semantics = {});

  const std::map<DatabaseId, DatabaseRecord>& databases() const noexcept { return databases_; }
  const std::map<CategoryId, SetCategory>& categories() const noexcept { return categories_; }
  const std::map<SetId, SetRecord>& sets() const noexcept { return sets_; }
  const std::map<MappingId, MappingDescriptor>& mappings() const noexcept { return mappings_; }
  const std::map<MappingId, ConstraintState>& states() const noexcept { return states_; }
  const std::map<MappingId, MappingInstance>& instances() const noexcept { return instances_; }

  const DatabaseRecord& database(DatabaseId id) const;
  const SetRecord& set(SetId id) const;
  const MappingDescriptor& mapping(MappingId id) const;
  const ConstraintState& state(MappingId id) const;

  std::optional<DatabaseId> find_database(std::string_view name) const;
  std::optional<SetId> find_set(DatabaseId db, std::string_view name) const;
  std::optional<MappingId> find_mapping(DatabaseId db, std::string_view name) const;

  std::vector<SetId> sets_of(DatabaseId db) const;
  std::vector<MappingId> mappings_of(DatabaseId db) const;
  std::vector<MappingId> compounds_containing(MappingId member) const;

  // Stored instance, or the composition of the members' stored instances.
  std::optional<MappingInstance> instance(MappingId id) const;
  const MappingInstance* stored_instance(MappingId id) const;
  void put_instance(MappingId id, MappingInstance inst);
  void erase_instance(MappingId id);

  void set_state(ConstraintState s);
  void set_descriptor(MappingDescriptor d);

  bool operator==(const Metacatalog&) const = default;

 private:
  friend SetRecord register_set(Metacatalog&, std::string, DatabaseId, SetType, std::optional<CategoryId>);
  friend MappingDescriptor register_mapping(Metacatalog&, std::string, SetId, SetId, std::vector<MappingId>,
                                            const MappingOptions&);
  friend void erase_mapping(Metacatalog&, MappingId);
  friend void load_database(Metacatalog&, const nlohmann::json&);

  std::int64_t next_id();

  std::map<DatabaseId, DatabaseRecord> databases_;
  std::map<CategoryId, SetCategory> categories_;
  std::map<SetId, SetRecord> sets_;
  std::map<MappingId, MappingDescriptor> mappings_;
  std::map<MappingId, ConstraintState> states_;
  std::map<MappingId, MappingInstance> instances_;
  std::int64_t last_id_ = 0;
};

SetRecord register_set(Metacatalog& meta, std::string name, DatabaseId db, SetType type = SetType::Entity,
                       std::optional<CategoryId> category = std::nullopt);
MappingDescriptor register_mapping(Metacatalog& meta, std::string name, SetId domain, SetId codomain,
                                   std::vector<MappingId> members = {}, const MappingOptions& opts = {});
// Removes the mapping, every compound containing it, and their states and instances.
void erase_mapping(Metacatalog& meta, MappingId id);

// Referential integrity across all records; throws IntegrityError.
void validate(const Metacatalog& meta);

nlohmann::json database_to_json(const Metacatalog& meta, DatabaseId db);
void load_database(Metacatalog& meta, const nlohmann::json& doc);

std::string database_file_name(const DatabaseRecord& db);
// One <db>.matbase.json per database.
void save(const Metacatalog& meta, const std::filesystem::path& dir);
// A directory of *.matbase.json files, or a single such file.
Metacatalog load(const std::filesystem::path& path);

nlohmann::json mapping_to_json(const Metacatalog& meta, const MappingDescriptor& m);
nlohmann::json set_to_json(const SetRecord& s);

}  // namespace smce
