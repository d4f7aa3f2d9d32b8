#include <gtest/gtest.h>

#include "smce/constraint_model.hpp"
#include "smce/errors.hpp"

using namespace smce;
using CT = ConstraintType;

TEST(ConstraintModel, WeightsArePowersOfTwo) {
  const std::uint32_t expected[] = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384, 32768, 65536};
  for (std::size_t i = 0; i < kConstraintTypeCount; ++i) EXPECT_EQ(weight(kAllConstraintTypes[i]), expected[i]);
  EXPECT_EQ(weight(CT::Total), 1u);
  EXPECT_EQ(weight(CT::RepresentativeSystemMapping), 8192u);
  EXPECT_EQ(weight(CT::SelfMap), 65536u);
}

TEST(ConstraintModel, SystemFlags) {
  int n = 0;
  for (auto t : kAllConstraintTypes) n += is_system(t);
  EXPECT_EQ(n, 3);
  EXPECT_TRUE(is_system(CT::SelfMap));
  EXPECT_TRUE(is_system(CT::CanonicalProjection));
  EXPECT_TRUE(is_system(CT::CanonicalInjection));
  EXPECT_FALSE(is_system(CT::Total));
}

TEST(ConstraintModel, EncodeExamples) {
  EXPECT_EQ(encode({CT::Total}).value, 1u);
  EXPECT_EQ(encode({}).value, 0u);
  EXPECT_EQ(encode({CT::SelfMap, CT::Onto}).value, 65552u);
  EXPECT_EQ(encode({CT::SelfMap, CT::Total, CT::OneToOne}).value, 65545u);
}

TEST(ConstraintModel, DecodeExamples) {
  EXPECT_EQ(decode(CombinationCode{65556}), (ConstraintFlags{CT::SelfMap, CT::Onto, CT::NonPrime}));
  EXPECT_TRUE(decode(CombinationCode{0}).empty());
  EXPECT_EQ(decode(CombinationCode{24}), (ConstraintFlags{CT::OneToOne, CT::Onto}));
  EXPECT_THROW(decode(std::int64_t{131072}), RangeError);
  EXPECT_THROW(decode(std::int64_t{-1}), RangeError);
}

TEST(ConstraintModel, RoundTripExhaustive) {
  for (std::uint32_t x = 0; x <= kMaxCombinationCode; ++x) {
    auto f = decode(CombinationCode{x});
    ASSERT_EQ(encode(f).value, x);
    ASSERT_EQ(decode(encode(f)), f);
  }
}

TEST(ConstraintModel, EffectiveSemantics) {
  EXPECT_EQ(effective_semantics({CT::SelfMap, CT::Total, CT::Reflexive}).variant(CT::Reflexive), Variant::Plain);
  EXPECT_EQ(effective_semantics({CT::SelfMap, CT::Reflexive}).variant(CT::Reflexive), Variant::Null);
  EXPECT_EQ(effective_semantics({CT::SelfMap, CT::Total, CT::Acyclic}).variant(CT::Acyclic), Variant::Plain);
  EXPECT_EQ(effective_semantics({CT::SelfMap}).variant(CT::Acyclic), Variant::Plain);
  for (std::uint32_t x = 0; x <= kMaxCombinationCode; x += 97) {
    auto f = ConstraintFlags::from_bits(x);
    auto s = effective_semantics(f);
    for (auto t : kAllConstraintTypes)
      EXPECT_EQ(s.variant(t), has_null_variant(t) && !f.contains(CT::Total) ? Variant::Null : Variant::Plain);
  }
}

TEST(ConstraintModel, ParseAndFormat) {
  auto f = parse_flags("t,sm,OT,np");
  EXPECT_EQ(f, (ConstraintFlags{CT::Total, CT::SelfMap, CT::Onto, CT::NonPrime}));
  EXPECT_EQ(format_flags(f), "SM,OT,NP,T");
  EXPECT_TRUE(parse_flags("").empty());
  EXPECT_EQ(parse_type("OneToOne"), CT::OneToOne);
  EXPECT_EQ(parse_type("rs"), CT::RepresentativeSystemMapping);
  EXPECT_THROW(parse_type("XX"), ParseError);
  std::string all;
  for (auto t : ConstraintFlags::from_bits(kMaxCombinationCode).members()) all += std::string(all.empty() ? "" : ",") + std::string(abbreviation(t));
  EXPECT_EQ(all, "SM,CP,CI,RS,A,Q,I,AS,S,IR,R,B,OT,UK,NP,DV,T");
}
