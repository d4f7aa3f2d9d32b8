#pragma once

#include "smce/catalog_store.hpp"
#include "smce/enforcement.hpp"

namespace smce::testing {

struct Geography {
  Metacatalog meta;
  DatabaseId db{};
  SetId states{}, cities{}, nat{};
  MappingId x{}, state_capital{}, state{}, compound{};
};

// The STATES form: object id x, StateCapital, State and the compound State o StateCapital.
inline Geography geography() {
  const auto& cat = default_catalog();
  Geography g;
  g.db = g.meta.create_database("Geography", "States and their capitals");
  g.states = register_set(g.meta, "STATES", g.db).id;
  g.cities = register_set(g.meta, "CITIES", g.db).id;
  g.nat = register_set(g.meta, "NAT(10)", g.db, SetType::Value).id;
  g.x = register_mapping(g.meta, "x", g.states, g.nat).id;
  g.state_capital = register_mapping(g.meta, "StateCapital", g.states, g.cities).id;
  g.state = register_mapping(g.meta, "State", g.cities, g.states).id;
  g.compound = register_mapping(g.meta, "State * StateCapital", g.states, g.states, {g.state, g.state_capital}).id;
  toggle_constraint(g.meta, g.x, ConstraintType::Total, true, cat);
  toggle_constraint(g.meta, g.x, ConstraintType::OneToOne, true, cat);
  toggle_constraint(g.meta, g.state_capital, ConstraintType::OneToOne, true, cat);
  toggle_constraint(g.meta, g.state, ConstraintType::Total, true, cat);
  toggle_constraint(g.meta, g.compound, ConstraintType::Reflexive, true, cat);
  g.meta.put_instance(g.state_capital,
                      MappingInstance(FiniteSet("STATES", {"CA", "NY"}), FiniteSet("CITIES", {"Sacramento", "Albany", "NYC"}),
                                      std::vector<int>{0, 1}));
  g.meta.put_instance(g.state, MappingInstance(FiniteSet("CITIES", {"Sacramento", "Albany", "NYC"}),
                                               FiniteSet("STATES", {"CA", "NY"}), std::vector<int>{0, 1, 1}));
  return g;
}

}  // namespace smce::testing
