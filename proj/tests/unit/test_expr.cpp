#include <gtest/gtest.h>

#include <cmath>

#include "perron/error.hpp"
#include "perron/expr.hpp"

using namespace perron;

TEST(Expr, RationalPowerNode) {
  const Expr e = parse_expr("t^(-2/3)");
  ASSERT_EQ(e.node().kind, Expr::Kind::kPow);
  ASSERT_TRUE(e.node().rational.has_value());
  EXPECT_EQ(*e.node().rational, (Expr::Rational{-2, 3}));
  EXPECT_NEAR(e.evaluate(8.0).real(), 0.25, 1e-15);
  // real odd root of a negative base
  EXPECT_NEAR(parse_expr("t^(1/3)").evaluate(-27.0).real(), -3.0, 1e-14);
}

TEST(Expr, Precedence) {
  EXPECT_EQ(parse_expr("2^3^2").evaluate(0).real(), 512.0);
  EXPECT_EQ(parse_expr("-2^2").evaluate(0).real(), -4.0);
  EXPECT_EQ(parse_expr("1-2-3").evaluate(0).real(), -4.0);
  EXPECT_EQ(parse_expr("8/4/2").evaluate(0).real(), 1.0);
  EXPECT_EQ(parse_expr("1+2*t").evaluate(3).real(), 7.0);
}

TEST(Expr, FunctionsAgainstStd) {
  const double t = 1.7;
  EXPECT_DOUBLE_EQ(parse_expr("sqrt(t)").evaluate(t).real(), std::sqrt(t));
  EXPECT_DOUBLE_EQ(parse_expr("cbrt(t)").evaluate(t).real(), std::cbrt(t));
  EXPECT_DOUBLE_EQ(parse_expr("exp(-t)").evaluate(t).real(), std::exp(-t));
  EXPECT_DOUBLE_EQ(parse_expr("log(t)").evaluate(t).real(), std::log(t));
  EXPECT_DOUBLE_EQ(parse_expr("sin(t)*cos(t)").evaluate(t).real(), std::sin(t) * std::cos(t));
  EXPECT_DOUBLE_EQ(parse_expr("abs(-t)").evaluate(t).real(), t);
  EXPECT_DOUBLE_EQ(parse_expr("pow(t^2+1, -1/3)").evaluate(t).real(), std::pow(t * t + 1, -1.0 / 3.0));
  EXPECT_DOUBLE_EQ(parse_expr("pi").evaluate(0).real(), std::acos(-1.0));
  EXPECT_EQ(parse_expr("2i*t").evaluate(2.0), cplx(0, 4));
  EXPECT_DOUBLE_EQ(parse_expr("1e-3").evaluate(0).real(), 1e-3);
}

TEST(Expr, RoundTrip) {
  for (const char* s : {"t^(-2/3)", "(t^2+1)^(-1/3)", "-t", "1/(1+t)^2", "2-(3-t)", "exp(-t)*sin(2*t)",
                        "pow(t, 0.5)", "2i+t", "t^2^3", "(-t)^2", "0.01*(1+t)^(-1.5)"}) {
    const Expr e = parse_expr(s);
    const Expr back = parse_expr(e.to_string());
    EXPECT_EQ(e, back) << s << " -> " << e.to_string();
    EXPECT_EQ(back.to_string(), e.to_string());
  }
}

TEST(Expr, ParseErrorsCarryOffset) {
  try {
    parse_expr("t^");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
    EXPECT_FALSE(e.expected().empty());
  }
  try {
    parse_expr("1 + foo(t)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse_expr("(t"), ParseError);
  EXPECT_THROW(parse_expr("sqrt(t, 2)"), ParseError);
  EXPECT_THROW(parse_expr(""), ParseError);
}

TEST(Expr, EvalErrors) {
  EXPECT_THROW(parse_expr("1/t").evaluate(0.0), EvalError);
  EXPECT_THROW(parse_expr("log(t)").evaluate(-1.0), EvalError);
  EXPECT_THROW(parse_expr("t^(-1/2)").evaluate(0.0), EvalError);
  EXPECT_EQ(parse_expr("t^(2/3)").evaluate(0.0), cplx(0.0));
}

TEST(Expr, ConstantDetection) {
  EXPECT_TRUE(parse_expr("2*pi").is_constant());
  EXPECT_FALSE(parse_expr("0*t").is_constant());
  EXPECT_EQ(Expr::number(3.0).evaluate(1.0), cplx(3.0));
  EXPECT_EQ(Expr::variable().evaluate(4.5), cplx(4.5));
}
