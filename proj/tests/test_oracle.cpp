#include <set>

#include <gtest/gtest.h>

#include "smce/errors.hpp"
#include "smce/oracle.hpp"

using namespace smce;
using CT = ConstraintType;

TEST(Oracle, EnumerationCounts) {
  EXPECT_EQ(enumerate_selfmaps(2, false).size(), 4u);
  EXPECT_EQ(enumerate_selfmaps(3, true).size(), 64u);
  EXPECT_EQ(enumerate_selfmaps(4, true).size(), 625u);
  EXPECT_EQ(selfmap_count(4, false), 256u);
  EXPECT_EQ(selfmap_count(5, true), 7776u);
  EXPECT_EQ(enumerate_selfmaps(0, true).size(), 1u);
}

TEST(Oracle, EnumerationHasNoDuplicates) {
  for (bool nulls : {false, true}) {
    std::set<std::vector<int>> seen;
    std::uint64_t n = 0;
    for_each_selfmap(4, nulls, [&](std::span<const int> g) {
      seen.insert({g.begin(), g.end()});
      ++n;
    });
    EXPECT_EQ(n, selfmap_count(4, nulls));
    EXPECT_EQ(seen.size(), n);
  }
}

TEST(Oracle, EnumerationOrderNullFirst) {
  auto all = enumerate_selfmaps(2, true);
  EXPECT_EQ(format_inline_instance(all.front()), "0>null,1>null");
  EXPECT_EQ(format_inline_instance(all.back()), "0>1,1>1");
}

TEST(Oracle, SpecExamples) {
  auto r = verify_proposition(find_proposition("P7.i"), 4);
  EXPECT_EQ(r.checked, 625u);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(verify_proposition(find_proposition("P3.i"), 4).passed());
  EXPECT_TRUE(verify_proposition(find_proposition("P3.iv"), 4).passed());
}

TEST(Oracle, ReflexiveOnlyIdentity) {
  int n = 0;
  for_each_selfmap(4, false, [&](std::span<const int> g) { n += graph::reflexive(g, Variant::Plain); });
  EXPECT_EQ(n, 1);
}

TEST(Oracle, AllPropositionsAtFour) {
  std::set<std::string> failing;
  for (const auto& r : verify_all(4)) {
    if (!r.passed()) failing.insert(r.id);
  }
  EXPECT_EQ(failing, (std::set<std::string>{"P3.vi", "P13.iv"}));
}

// Frozen results: both statements have finite counterexamples under the instance definitions.
TEST(Oracle, KnownCounterexamples) {
  auto vi = verify_proposition(find_proposition("P3.vi"), 4);
  EXPECT_EQ(vi.counterexamples.size(), 14u);
  ASSERT_FALSE(vi.counterexamples.empty());
  EXPECT_EQ(format_inline_instance(vi.counterexamples.front()), "0>0,1>1,2>3,3>2");
  auto iv = verify_proposition(find_proposition("P13.iv"), 4);
  EXPECT_EQ(iv.counterexamples.size(), 88u);
  ASSERT_FALSE(iv.counterexamples.empty());
  const auto& w = iv.counterexamples.front();
  EXPECT_EQ(format_inline_instance(w), "0>null,1>null,2>null,3>0");
  EXPECT_TRUE(check_constraint(w, CT::Symmetric, Variant::Null));
  EXPECT_TRUE(check_constraint(w, CT::Idempotent, Variant::Null));
  EXPECT_FALSE(check_constraint(w, CT::Reflexive, Variant::Null));
}

TEST(Oracle, CounterexamplesRecheck) {
  for (const auto& r : verify_all(4)) {
    const auto& spec = find_proposition(r.id);
    for (const auto& c : r.counterexamples) EXPECT_TRUE(spec.refuted_by(c.self_graph())) << r.id;
  }
}

TEST(Oracle, UncheckableFlagIsSpecError) {
  PropositionSpec bad{"bad", {flag(CT::NonPrime)}, {flag(CT::Total)}};
  EXPECT_THROW(verify_proposition(bad, 3), SpecError);
  PropositionSpec dv{"dv", {flag(CT::Total)}, {flag(CT::DefaultValue)}};
  EXPECT_THROW(verify_proposition(dv, 3), SpecError);
}

TEST(Oracle, ExclusionForm) {
  PropositionSpec ex{"x", {flag(CT::Reflexive)}, {flag(CT::Irreflexive)}, PropositionForm::Exclusion};
  EXPECT_TRUE(verify_proposition(ex, 3).passed());
  PropositionSpec wrong{"y", {flag(CT::Total)}, {flag(CT::OneToOne)}, PropositionForm::Exclusion};
  EXPECT_FALSE(verify_proposition(wrong, 3).passed());
}

TEST(Audit, FullAuditAtFour) {
  auto a = audit_catalog(default_catalog(), 4);
  EXPECT_EQ(a.combinations, 4096u);
  EXPECT_EQ(a.incoherent, 3436u);
  EXPECT_EQ(a.no_model, 3240u);
  EXPECT_EQ(a.policy_incoherent, 196u);
  EXPECT_TRUE(a.refutations.empty());
  EXPECT_EQ(a.rules.size(), 18u);
  EXPECT_EQ(a.invalid_rules, 0u);
  EXPECT_TRUE(a.passed());

  auto entry = [&](ConstraintFlags f) -> const AuditEntry* {
    for (const auto& e : a.policy)
      if (e.flags == f) return &e;
    return nullptr;
  };
  EXPECT_NE(entry({CT::SelfMap, CT::OneToOne, CT::Idempotent, CT::Total}), nullptr);
  EXPECT_EQ(entry({CT::SelfMap, CT::Reflexive, CT::Irreflexive}), nullptr);
  for (const auto& e : a.policy) EXPECT_EQ(e.models, 1u);
}

TEST(Audit, SemanticCombinations) {
  auto all = semantic_combinations();
  EXPECT_EQ(all.size(), 4096u);
  for (const auto& f : all) {
    EXPECT_TRUE(f.contains(CT::SelfMap));
    EXPECT_TRUE(kSemanticFlags.contains_all(f - CT::SelfMap));
  }
}

TEST(Audit, Json) {
  auto j = audit_to_json(audit_catalog(default_catalog(), 3));
  EXPECT_EQ(j["n"], 3);
  EXPECT_TRUE(j.contains("refutations"));
}
