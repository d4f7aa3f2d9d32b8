#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "smce/enforcement.hpp"
#include "smce/errors.hpp"

using namespace smce;
using CT = ConstraintType;
using P = Provenance;

namespace {

const RuleCatalog& cat() { return default_catalog(); }

MappingDescriptor self_map_descriptor(bool compound = false) {
  MappingDescriptor d;
  d.id = MappingId{1};
  d.name = "sm";
  d.domain = d.codomain = SetId{1};
  if (compound) d.members = {MappingId{2}, MappingId{3}};
  return d;
}

ConstraintState asserted(std::initializer_list<CT> ts) {
  ConstraintState s(MappingId{1});
  for (auto t : ts) s.set({t});
  return s;
}

std::string describe(const ConstraintState& s) {
  std::string out;
  for (const auto& m : s.members) {
    if (!out.empty()) out += ' ';
    out += abbreviation(m.type);
    if (m.provenance == P::Implied) out += '*';
  }
  return out;
}

void check_work(const Outcome& o) {
  EXPECT_LE(o.work.lookups, 2);
  EXPECT_LE(o.work.closures, 1);
  EXPECT_LE(o.work.scans, 1);
}

// h: A -> B, g: B -> C and f = g o h.
struct Chain {
  Metacatalog meta;
  MappingId f{}, g{}, h{};
};

Chain chain() {
  Chain c;
  auto db = c.meta.create_database("D");
  auto a = register_set(c.meta, "A", db).id;
  auto b = register_set(c.meta, "B", db).id;
  auto cc = register_set(c.meta, "C", db).id;
  c.h = register_mapping(c.meta, "h", a, b).id;
  c.g = register_mapping(c.meta, "g", b, cc).id;
  c.f = register_mapping(c.meta, "f", a, cc, {c.g, c.h}).id;
  return c;
}

}  // namespace

TEST(Enforcement, AddOneToOneToTotalSelfMap) {
  auto inst = parse_inline_instance("1>2,2>1,3>3");
  auto o = add_constraint(asserted({CT::SelfMap, CT::Total}), CT::OneToOne, &inst, cat(), self_map_descriptor());
  ASSERT_TRUE(o.accepted());
  EXPECT_EQ(describe(o.state), "SM B* OT* UK T");
  EXPECT_EQ(o.state.find(CT::Onto)->note, "A.6.1.4 (i)");
  EXPECT_FALSE(o.unchecked);
  ASSERT_EQ(o.plans.size(), 1u);
  EXPECT_EQ(o.plans[0].deltas, (std::vector<PlanDelta>{{CT::OneToOne, PlanAction::InstallCheck}}));
  check_work(o);
}

TEST(Enforcement, AddReflexiveToSingleIsUnity) {
  auto o = add_constraint(asserted({CT::SelfMap, CT::Total}), CT::Reflexive, nullptr, cat(), self_map_descriptor());
  EXPECT_EQ(o.status, OutcomeStatus::RejectedUnity);
  EXPECT_EQ(o.note, "A.6.2.1 (ii)");
  EXPECT_EQ(o.message,
            "Reflexive cannot be added, as, according to A.6.2.1 (ii). self-map ^ total ^ single ^ reflexive, sm would "
            "become a unity mapping!");
  EXPECT_TRUE(add_constraint(asserted({CT::SelfMap, CT::Total}), CT::Reflexive, nullptr, cat(),
                             self_map_descriptor(true))
                  .accepted());
}

TEST(Enforcement, AddNonPrimeIncoherent) {
  auto o = add_constraint(asserted({CT::SelfMap, CT::Onto, CT::Total}), CT::NonPrime, nullptr, cat(),
                          self_map_descriptor());
  EXPECT_EQ(o.status, OutcomeStatus::RejectedIncoherent);
  EXPECT_EQ(o.note, "A.6.1.1 (viii)");
  EXPECT_EQ(o.message,
            "NonPrime cannot be added, as, according to A.6.1.1 (viii). non-prime ^ total ^ onto ^ self-map, the "
            "constraint set of sm would become incoherent!");
  check_work(o);
}

TEST(Enforcement, AddNonPrimeToNormalizedStateIsTrivial) {
  auto s = asserted({CT::SelfMap, CT::Total, CT::OneToOne});
  s.set({CT::Onto, P::Implied, "A.6.1.4 (i)"});
  s.set({CT::Bijective, P::Implied, "A.6.1.4 (i)"});
  auto o = add_constraint(s, CT::NonPrime, nullptr, cat(), self_map_descriptor());
  EXPECT_EQ(o.status, OutcomeStatus::RejectedTrivial);
  EXPECT_EQ(o.state, s);
}

TEST(Enforcement, AddTotalUnsatisfied) {
  auto inst = parse_inline_instance("1>2,2>null");
  auto o = add_constraint(ConstraintState(MappingId{1}), CT::Total, &inst, cat(), self_map_descriptor());
  EXPECT_EQ(o.status, OutcomeStatus::RejectedUnsatisfied);
  EXPECT_EQ(o.message, "Total cannot be added to the constraint set of sm, as its current instance does not satisfy it!");
  check_work(o);
}

TEST(Enforcement, AddWithoutInstanceIsUnchecked) {
  auto o = add_constraint(asserted({CT::SelfMap}), CT::Acyclic, nullptr, cat(), self_map_descriptor());
  ASSERT_TRUE(o.accepted());
  EXPECT_TRUE(o.unchecked);
  EXPECT_EQ(describe(o.state), "SM A AS* IR*");
}

TEST(Enforcement, AddExistingMemberThrows) {
  EXPECT_THROW(add_constraint(asserted({CT::SelfMap, CT::Total}), CT::Total, nullptr, cat(), self_map_descriptor()),
               ArgumentError);
  EXPECT_THROW(add_constraint(asserted({}), CT::SelfMap, nullptr, cat(), self_map_descriptor()), ArgumentError);
}

TEST(Enforcement, RemoveAcyclicDropsImplied) {
  auto added = add_constraint(asserted({CT::SelfMap}), CT::Acyclic, nullptr, cat(), self_map_descriptor());
  auto o = remove_constraint(added.state, CT::Acyclic, cat(), self_map_descriptor());
  ASSERT_TRUE(o.accepted());
  EXPECT_EQ(describe(o.state), "SM");
  EXPECT_EQ(o.plans[0].deltas, (std::vector<PlanDelta>{{CT::Acyclic, PlanAction::RemoveCheck}}));
  check_work(o);
}

TEST(Enforcement, RemoveImpliedRejected) {
  auto added = add_constraint(asserted({CT::SelfMap}), CT::Acyclic, nullptr, cat(), self_map_descriptor());
  auto o = remove_constraint(added.state, CT::Irreflexive, cat(), self_map_descriptor());
  EXPECT_EQ(o.status, OutcomeStatus::RejectedRedundantRemoval);
  EXPECT_EQ(o.note, "A.6.2.2 (iv)");
  EXPECT_EQ(o.message,
            "Irreflexive cannot be removed as it is implied by other constraints, according to A.6.2.2 (iv). self-map "
            "^ acyclic => asymmetric ^ irreflexive");
}

TEST(Enforcement, RemoveSingleton) {
  auto o = remove_constraint(asserted({CT::Total}), CT::Total, cat(), self_map_descriptor());
  ASSERT_TRUE(o.accepted());
  EXPECT_TRUE(o.state.members.empty());
  EXPECT_THROW(remove_constraint(asserted({CT::Total}), CT::OneToOne, cat(), self_map_descriptor()), NotFoundError);
}

TEST(Enforcement, AddThenRemoveRestoresState) {
  std::mt19937 rng(7);
  int checked = 0;
  for (const auto& row : cat().coherence_rows()) {
    if (!row.coherent || rng() % 8) continue;
    auto f = decode(row.x);
    auto desc = self_map_descriptor();
    if (!f.contains(CT::SelfMap)) desc.codomain = SetId{2};
    auto basis = closure_of(f, {f & kSystemFlags, {}, {}}).basis;
    auto norm = closure_of(basis, {basis & kSystemFlags, {}, {}});
    ConstraintState s(MappingId{1});
    for (auto t : norm.basis.members()) s.set({t});
    for (const auto& r : norm.redundant) s.set({r.flag, P::Implied, r.note});
    for (auto c : kAllConstraintTypes) {
      if (is_system(c) || s.has(c)) continue;
      auto added = add_constraint(s, c, nullptr, cat(), desc);
      if (!added.accepted() || added.state.find(c)->provenance != P::Asserted) continue;
      if (added.state.asserted() != (s.asserted() | c)) continue;
      auto removed = remove_constraint(added.state, c, cat(), desc);
      ASSERT_TRUE(removed.accepted()) << row.x.value << " " << abbreviation(c);
      EXPECT_EQ(removed.state, s) << row.x.value << " " << abbreviation(c) << ": " << describe(removed.state) << " vs "
                                  << describe(s);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Enforcement, AcceptedStatesAreCoherentAndMinimal) {
  std::mt19937 rng(11);
  auto desc = self_map_descriptor();
  for (int run = 0; run < 200; ++run) {
    auto s = asserted({CT::SelfMap});
    for (int step = 0; step < 12; ++step) {
      auto c = kAllConstraintTypes[rng() % kConstraintTypeCount];
      if (is_system(c)) continue;
      auto o = s.has(c) ? remove_constraint(s, c, cat(), desc) : add_constraint(s, c, nullptr, cat(), desc);
      if (!o.accepted()) {
        EXPECT_EQ(o.state, s);
        continue;
      }
      s = o.state;
      EXPECT_EQ(lookup(cat(), encode(s.all())).kind, VerdictKind::Coherent) << format_flags(s.all());
      for (auto t : (s.asserted() - kSystemFlags).members())
        EXPECT_FALSE(derive(s.asserted() - t).full.contains(t)) << format_flags(s.asserted()) << " " << abbreviation(t);
      EXPECT_EQ(derive(s.asserted()).full, s.all());
    }
  }
}

TEST(Enforcement, InstanceGateKeepsSatisfaction) {
  auto inst = parse_inline_instance("1>2,2>3,3>null");
  auto desc = self_map_descriptor();
  for (auto c : kAllConstraintTypes) {
    if (is_system(c)) continue;
    auto o = add_constraint(asserted({CT::SelfMap}), c, &inst, cat(), desc);
    if (o.accepted()) {
      EXPECT_TRUE(satisfies_set(inst, o.state.all())) << abbreviation(c);
    }
  }
}

TEST(Propagation, OneToOneOnCompoundDemotesOuter) {
  auto c = chain();
  ASSERT_TRUE(toggle_constraint(c.meta, c.h, CT::Onto, true, cat()).accepted());
  ASSERT_TRUE(toggle_constraint(c.meta, c.g, CT::OneToOne, true, cat()).accepted());
  auto r = toggle_constraint(c.meta, c.f, CT::OneToOne, true, cat());
  ASSERT_TRUE(r.accepted()) << r.message;
  EXPECT_EQ(describe(c.meta.state(c.f)), "UK");
  EXPECT_EQ(describe(c.meta.state(c.g)), "UK*");
  EXPECT_EQ(c.meta.state(c.g).find(CT::OneToOne)->note, "A.6.1.2 (vi)");
  EXPECT_EQ(c.meta.state(c.g).find(CT::OneToOne)->via, c.f);
  EXPECT_EQ(describe(c.meta.state(c.h)), "B* OT UK*");
  EXPECT_EQ(c.meta.state(c.h).find(CT::OneToOne)->note, "A.6.1.2 (iv)");
  bool g_uninstalled = false;
  for (const auto& p : r.plans)
    if (p.mapping == c.g)
      for (const auto& d : p.deltas) g_uninstalled |= d == PlanDelta{CT::OneToOne, PlanAction::RemoveCheck};
  EXPECT_TRUE(g_uninstalled);
}

TEST(Propagation, RemoveOntoFromCompound) {
  auto c = chain();
  ASSERT_TRUE(toggle_constraint(c.meta, c.h, CT::Onto, true, cat()).accepted());
  ASSERT_TRUE(toggle_constraint(c.meta, c.g, CT::OneToOne, true, cat()).accepted());
  ASSERT_TRUE(toggle_constraint(c.meta, c.f, CT::Onto, true, cat()).accepted());
  EXPECT_EQ(describe(c.meta.state(c.f)), "OT");
  EXPECT_EQ(describe(c.meta.state(c.g)), "B* OT* UK");
  EXPECT_EQ(describe(c.meta.state(c.h)), "OT*");
  EXPECT_EQ(c.meta.state(c.h).find(CT::Onto)->note, "A.6.1.2 (ix)");
  ASSERT_TRUE(toggle_constraint(c.meta, c.f, CT::Onto, false, cat()).accepted());
  EXPECT_EQ(describe(c.meta.state(c.f)), "");
  EXPECT_EQ(describe(c.meta.state(c.g)), "UK");
  EXPECT_EQ(describe(c.meta.state(c.h)), "");
}

TEST(Propagation, ReflexiveCompoundSelfMap) {
  Metacatalog meta;
  auto db = meta.create_database("D");
  auto s = register_set(meta, "S", db).id;
  auto t = register_set(meta, "T", db).id;
  auto h = register_mapping(meta, "h", s, t).id;
  auto i = register_mapping(meta, "i", t, s).id;
  auto sm = register_mapping(meta, "sm", s, s, {i, h}).id;
  auto rev = register_mapping(meta, "rev", t, t, {h, i}).id;
  ASSERT_TRUE(toggle_constraint(meta, sm, CT::Total, true, cat()).accepted());
  auto r = toggle_constraint(meta, sm, CT::Reflexive, true, cat());
  ASSERT_TRUE(r.accepted()) << r.message;
  EXPECT_EQ(meta.state(i).find(CT::Onto)->note, "A.6.1.2 (x)");
  EXPECT_EQ(meta.state(rev).find(CT::Idempotent)->note, "A.6.1.2 (xi)");
  EXPECT_EQ(meta.state(rev).find(CT::Idempotent)->provenance, P::Implied);
}

TEST(Propagation, ReachesFixpoint) {
  auto c = chain();
  toggle_constraint(c.meta, c.h, CT::Onto, true, cat());
  toggle_constraint(c.meta, c.g, CT::OneToOne, true, cat());
  toggle_constraint(c.meta, c.f, CT::OneToOne, true, cat());
  auto before = c.meta;
  EXPECT_TRUE(reconcile_database(c.meta, c.meta.mapping(c.f).database, cat()).empty());
  EXPECT_EQ(c.meta, before);
  auto g = smce::testing::geography();
  auto geo_before = g.meta;
  EXPECT_TRUE(reconcile_database(g.meta, g.db, cat()).empty());
  EXPECT_EQ(g.meta, geo_before);
}

TEST(Propagation, RejectionCommitsNothing) {
  auto c = chain();
  toggle_constraint(c.meta, c.g, CT::Total, true, cat());
  toggle_constraint(c.meta, c.f, CT::OneToOne, true, cat());
  ASSERT_TRUE(c.meta.state(c.h).has(CT::OneToOne));
  auto before = c.meta;
  auto r = toggle_constraint(c.meta, c.h, CT::NonPrime, true, cat());
  EXPECT_EQ(r.status, OutcomeStatus::RejectedTrivial);
  EXPECT_EQ(c.meta, before);
}

TEST(Toggle, NoopAndErrors) {
  auto g = smce::testing::geography();
  auto r = toggle_constraint(g.meta, g.x, CT::Total, true, cat());
  EXPECT_TRUE(r.noop);
  EXPECT_TRUE(r.accepted());
  auto unity = g.meta.set(g.states).unity;
  EXPECT_THROW(toggle_constraint(g.meta, unity, CT::Acyclic, true, cat()), ReadOnlyError);
  EXPECT_THROW(toggle_constraint(g.meta, g.x, CT::SelfMap, true, cat()), ArgumentError);
  EXPECT_THROW(toggle_constraint(g.meta, MappingId{9999}, CT::Total, true, cat()), NotFoundError);
}

TEST(Toggle, GeographyFixture) {
  auto g = smce::testing::geography();
  EXPECT_EQ(describe(g.meta.state(g.x)), "UK T");
  EXPECT_EQ(describe(g.meta.state(g.state)), "T");
  EXPECT_EQ(describe(g.meta.state(g.compound)), "SM R UK*");
  EXPECT_EQ(g.meta.state(g.state_capital).find(CT::OneToOne)->provenance, P::Implied);
  auto unity = g.meta.set(g.states).unity;
  EXPECT_EQ(g.meta.state(unity).all(), kUnityFlags);
}

TEST(Toggle, UnsatisfiedAgainstStoredInstance) {
  auto g = smce::testing::geography();
  auto before = g.meta;
  auto r = toggle_constraint(g.meta, g.state, CT::OneToOne, true, cat());
  EXPECT_EQ(r.status, OutcomeStatus::RejectedUnsatisfied);
  EXPECT_EQ(g.meta, before);
}

TEST(Retype, InclusionMakesSelfMap) {
  Metacatalog meta;
  auto db = meta.create_database("D");
  auto d = register_set(meta, "D", db).id;
  auto e = register_set(meta, "E", db).id;
  auto f = register_mapping(meta, "f", d, e).id;
  RetypeRequest req;
  req.inclusion = true;
  auto r = retype_mapping(meta, f, req, cat());
  ASSERT_TRUE(r.accepted()) << r.message;
  EXPECT_TRUE(meta.state(f).has(CT::SelfMap));
  EXPECT_TRUE(toggle_constraint(meta, f, CT::Acyclic, true, cat()).accepted());
  req.inclusion = false;
  r = retype_mapping(meta, f, req, cat());
  EXPECT_FALSE(r.accepted());
  EXPECT_TRUE(meta.state(f).has(CT::SelfMap));
}

TEST(Delete, CascadesToCompounds) {
  auto c = chain();
  toggle_constraint(c.meta, c.f, CT::OneToOne, true, cat());
  EXPECT_TRUE(c.meta.state(c.h).has(CT::OneToOne));
  delete_mapping(c.meta, c.g, cat());
  EXPECT_EQ(c.meta.mappings().count(c.f), 0u);
  EXPECT_EQ(c.meta.mappings().count(c.g), 0u);
  EXPECT_TRUE(c.meta.state(c.h).members.empty());
}

TEST(Enforcement, OutcomeJson) {
  auto o = add_constraint(asserted({CT::SelfMap}), CT::Acyclic, nullptr, cat(), self_map_descriptor());
  auto j = outcome_to_json(o);
  EXPECT_EQ(j["status"], "Accepted");
  EXPECT_EQ(j["unchecked"], true);
  EXPECT_EQ(j["plans"][0]["deltas"][0]["action"], "install-check");
}
