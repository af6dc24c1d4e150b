#include <gtest/gtest.h>

#include <string>

#include "perron/config.hpp"
#include "perron/error.hpp"

using namespace perron;

namespace {

const std::string kBase = R"cfg(
order = 5
coefficients = [0, 4, 0, -5, 0]
perturbations = ["(t^2+1)^(-1/3)", "(t^2+1)^(-1/3)", "0", "t^(-2/3)", "0"]
t0 = 10
t_end = 50
lambda = "index:3"
)cfg";

std::string key_of_error(const std::string& text) {
  try {
    parse_config(text).ode();
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST(Config, ParsesBase) {
  const RunConfig c = parse_config(kBase);
  EXPECT_EQ(c.order, 5);
  EXPECT_EQ(c.coefficients[3], cplx(-5.0));
  EXPECT_DOUBLE_EQ(c.step, 0.02);
  EXPECT_EQ(c.select_lambda({-2.0, -1.0, 0.0, 1.0, 2.0}), cplx(1.0));
  const PerturbedODE ode = c.ode();
  EXPECT_NEAR(ode.r_at(8.0)[3].real(), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(ode.t0, 10.0);
}

TEST(Config, ComplexLambdaAndOptionalKeys) {
  const RunConfig c = parse_config(replace(kBase, "\"index:3\"", "[1, 0.5]") + "picard.M = 0.25\nbeta = 0.3\n");
  EXPECT_EQ(c.select_lambda({}), cplx(1.0, 0.5));
  EXPECT_DOUBLE_EQ(*c.ball_M, 0.25);
  EXPECT_DOUBLE_EQ(*c.beta, 0.3);
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_EQ(key_of_error(replace(kBase, "[\"(t^2+1)^(-1/3)\", \"(t^2+1)^(-1/3)\", \"0\", \"t^(-2/3)\", \"0\"]", "[]")),
            "perturbations");
  EXPECT_EQ(key_of_error(replace(kBase, "\"t^(-2/3)\"", "\"t^\"")), "perturbations[3]");
  EXPECT_EQ(key_of_error(replace(kBase, "\"t^(-2/3)\"", "\"1/(t-10)\"")), "perturbations[3]");
  EXPECT_EQ(key_of_error(kBase + "bogus = 1\n"), "bogus");
  EXPECT_EQ(key_of_error(kBase + "t0 = 3\n"), "t0");
  EXPECT_EQ(key_of_error(replace(kBase, "t_end = 50", "t_end = 5")), "t_end");
  EXPECT_EQ(key_of_error(replace(kBase, "order = 5", "order = [5")), "order");
  EXPECT_EQ(key_of_error(replace(kBase, "\"index:3\"", "\"index:9\"")), "lambda");
  EXPECT_EQ(key_of_error(kBase + "quad.panel_order = 2\n"), "quad.panel_order");
  EXPECT_EQ(key_of_error(replace(kBase, "t0 = 10\n", "")), "t0");
  EXPECT_EQ(key_of_error(kBase + "no equals sign\n"), "line 8");
}

TEST(Config, HashIsStableAndIgnoresOutputs) {
  const std::string h = parse_config(kBase).hash();
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(parse_config("# comment\n" + kBase + "\n").hash(), h);
  EXPECT_EQ(parse_config(kBase + "output.csv_dir = \"/tmp/x\"\noutput.json = \"a.json\"\n").hash(), h);
  EXPECT_NE(parse_config(replace(kBase, "t_end = 50", "t_end = 51")).hash(), h);
  EXPECT_NE(parse_config(kBase + "seed = 2\n").hash(), h);
}

TEST(Config, CanonicalJsonRoundTrip) {
  const RunConfig c = parse_config(kBase);
  const nlohmann::json j = c.to_json();
  EXPECT_EQ(j.at("order"), 5);
  EXPECT_EQ(j.dump(), parse_config(kBase).to_json().dump());
}
