#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "infotweet/error.hpp"
#include "infotweet/model_io.hpp"

using namespace infotweet;

namespace {

ModelContainer round_trip(const ModelContainer& c) {
  std::ostringstream out;
  c.write(out);
  std::istringstream in(out.str());
  return ModelContainer::read(in);
}

}  // namespace

TEST(ModelContainer, RoundTripIsExact) {
  ModelContainer c;
  c.set("kind", "lr");
  c.set("dims", "3");
  c.add_block("w", 2, 3, {0.1, 1.0 / 3.0, -2.5e-300, std::numbers::pi, 1e300, -0.0});
  c.add_vector("b", std::vector<double>{std::nextafter(1.0, 2.0)});
  const ModelContainer r = round_trip(c);
  EXPECT_EQ(r.header(), c.header());
  EXPECT_EQ(r.get("kind"), "lr");
  EXPECT_EQ(r.values("w", 2, 3), c.values("w", 2, 3));
  EXPECT_EQ(r.values("b", 1, 1)[0], std::nextafter(1.0, 2.0));
}

TEST(ModelContainer, TextShape) {
  ModelContainer c;
  c.set("kind", "nb");
  c.add_block("m", 1, 2, {0.5, 2.0});
  std::ostringstream out;
  c.write(out);
  EXPECT_EQ(out.str().rfind("infotweet-model 1\nkind nb\nblock m 1 2\n", 0), 0u) << out.str();
  EXPECT_NE(out.str().find("\nend\n"), std::string::npos);
}

TEST(ModelContainer, Errors) {
  ModelContainer c;
  c.add_block("w", 2, 2, {1, 2, 3, 4});
  EXPECT_THROW(c.get("missing"), ParseError);
  EXPECT_THROW(c.block("missing"), ParseError);
  EXPECT_THROW(c.values("w", 1, 4), ParseError);
  EXPECT_THROW(c.add_block("x", 2, 2, {1}), Error);

  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return ModelContainer::read(in);
  };
  EXPECT_THROW(parse("not-a-model\n"), ParseError);
  EXPECT_THROW(parse("infotweet-model 1\nblock w 1 2\n1\nend\n"), ParseError);
  EXPECT_THROW(parse("infotweet-model 1\nblock w 1 1\nabc\nend\n"), ParseError);
  EXPECT_THROW(parse("infotweet-model 1\nblock w 2 1\n1\n"), ParseError);
}
