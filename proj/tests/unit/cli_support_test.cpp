#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cli_support.hpp"
#include "ltower/errors.hpp"

using namespace ltower;
using namespace ltower::cli;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    const auto d = std::filesystem::temp_directory_path() / ("ltower_unit_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST(Parse, LaurentPolynomials) {
    const FieldPtr F = FqField::make(3, 1);
    const LPoly f = parse_lpoly(F, "T^2 + (1 + pi)*T - pi^-1");
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[2], Laurent::constant(F, 1));
    EXPECT_EQ(f[1], Laurent(F, 0, {1, 1}));
    EXPECT_EQ(f[0], Laurent::pi_power(F, -1).scale(2));
    EXPECT_EQ(parse_laurent(F, "#2*pi^3 - 4"), Laurent::monomial(F, 2, 3) + Laurent::from_int(F, -4));
    EXPECT_THROW(parse_laurent(F, "T + 1"), PreconditionError);
    EXPECT_THROW(parse_lpoly(F, "T^-1"), PreconditionError);
    EXPECT_THROW(parse_lpoly(F, "#3"), PreconditionError);
    EXPECT_THROW(parse_lpoly(F, "(1 + pi"), PreconditionError);
    EXPECT_THROW(parse_lpoly(F, "x"), PreconditionError);
}

TEST(Parse, MatrixSpecs) {
    const FieldPtr F = FqField::make(2, 1);
    const LocalMatrix c = parse_matrix(F, "companion:T^2+T+1");
    EXPECT_EQ(c, LocalMatrix::companion({Laurent::constant(F, 1), Laurent::constant(F, 1), Laurent::constant(F, 1)}));
    EXPECT_EQ(parse_matrix(F, "identity:3"), LocalMatrix::identity(F, 3));
    EXPECT_EQ(parse_matrix(F, "diag:pi,1"), LocalMatrix::diagonal({Laurent::pi_power(F, 1), Laurent::constant(F, 1)}));
    EXPECT_EQ(parse_matrix(F, "scalar:2:pi"), LocalMatrix::scalar(F, 2, Laurent::pi_power(F, 1)));
    const LocalMatrix m = parse_matrix(F, "matrix:1,pi;0,1");
    EXPECT_EQ(m.at(0, 1), Laurent::pi_power(F, 1));
    EXPECT_EQ(m.at(1, 0), Laurent::zero(F));
    EXPECT_EQ(parse_matrix(F, "inv:matrix:1,pi;0,1") * m, LocalMatrix::identity(F, 2));
    EXPECT_THROW(parse_matrix(F, "companion:pi*T^2+1"), PreconditionError);
    EXPECT_THROW(parse_matrix(F, "matrix:1,0;1"), PreconditionError);
    EXPECT_THROW(parse_matrix(F, "rotate:3"), PreconditionError);
}

TEST(Parse, AlgebraElements) {
    const DivisionAlgebra B(2, 2);
    EXPECT_TRUE(B.equal(parse_algebra_elem(B, "Pi^2"), B.from_coords({Laurent::pi_power(B.ext(), 1), Laurent::zero(B.ext())})));
    EXPECT_TRUE(B.equal(parse_algebra_elem(B, "#2 + Pi"), B.add(B.from_ext(2), B.uniformizer())));
    EXPECT_THROW(parse_algebra_elem(B, "#4"), PreconditionError);
    EXPECT_THROW(parse_algebra_elem(B, "T"), PreconditionError);
}

TEST(Parse, USpec) {
    const USpec b = parse_u_spec("pi", 3, 2);
    EXPECT_EQ(b.entries, (std::vector<std::string>{"pi", "pi"}));
    EXPECT_TRUE(b.nil_orders.empty());
    const USpec w = parse_u_spec("w,w^2", 3, 3);
    EXPECT_EQ(w.nil_orders, (std::vector<int>{3, 3}));
    const RingPtr R = CoeffRing::base(FqField::make(2, 1), 2, w.nil_orders);
    const auto u = realize_u(w, R);
    ASSERT_EQ(u.size(), 2u);
    EXPECT_EQ(u[0], R->w(0));
    EXPECT_EQ(u[1], R->w(1) * R->w(1));
    EXPECT_THROW(parse_u_spec("pi,pi,pi", 3, 2), PreconditionError);
    EXPECT_THROW(parse_u_spec("1", 2, 2), PreconditionError);
    EXPECT_THROW(parse_u_spec("pi^0", 2, 2), PreconditionError);
    EXPECT_THROW(parse_u_spec("w", 2, 1), PreconditionError);
}

TEST(Config, DefaultsFileAndOverrides) {
    RunConfig c = RunConfig::defaults();
    EXPECT_EQ(c.integer("q"), 2);
    EXPECT_EQ(c.str("format"), "json");
    EXPECT_TRUE(c.flag("bruteforce"));
    const auto d = scratch_dir("config");
    {
        std::ofstream out(d / "run.cfg");
        out << "# comment\nq = 3\nm=2\n";
    }
    c.load_file(d / "run.cfg");
    EXPECT_EQ(c.integer("q"), 3);
    c.set("m", "4");
    EXPECT_EQ(c.integer("m"), 4);
    EXPECT_THROW(c.set("colour", "red"), PreconditionError);
    c.set("rank_cap", "0");
    EXPECT_THROW((void)c.positive("rank_cap"), PreconditionError);
    c.set("timings", "maybe");
    EXPECT_THROW((void)c.flag("timings"), PreconditionError);
    c.set("q", "two");
    EXPECT_THROW((void)c.integer("q"), PreconditionError);
    {
        std::ofstream out(d / "bad.cfg");
        out << "q 3\n";
    }
    EXPECT_THROW(c.load_file(d / "bad.cfg"), PreconditionError);
    EXPECT_THROW(c.load_file(d / "missing.cfg"), PreconditionError);
    std::filesystem::remove_all(d);
}

TEST(ValueTables, ReadSample) {
    const ValueTable t = read_value_table(std::filesystem::path(LTOWER_TEST_DATA) / "values_q2_n2_m1.txt");
    EXPECT_EQ(t.q, 2u);
    EXPECT_EQ(t.n, 2);
    ASSERT_EQ(t.values.size(), 4u);
    EXPECT_TRUE(t.values[0].bottom);
    EXPECT_EQ(t.values[1].tiers, (std::vector<Rational>{Rational(-1), Rational(0)}));
}

TEST(ValueTables, Malformed) {
    const auto d = scratch_dir("values");
    const auto write = [&](const std::string& body) {
        std::ofstream(d / "t.txt") << body;
        return d / "t.txt";
    };
    EXPECT_THROW(read_value_table(write("q 2\nn 2\nm 1\n0 bottom\n1 0\n")), PreconditionError);
    EXPECT_THROW(read_value_table(write("q 2\nn 2\nm 1\n0 bottom\n1 0\n1 0\n2 0\n")), PreconditionError);
    EXPECT_THROW(read_value_table(write("q 2\nn 2\nm 1\n0 bottom\n1 x\n2 0\n3 0\n")), PreconditionError);
    EXPECT_THROW(read_value_table(write("0 bottom\n")), PreconditionError);
    std::filesystem::remove_all(d);
}

TEST(Cache, StoreLoadAndCorruption) {
    const auto d = scratch_dir("cache");
    Cache c(d.string());
    EXPECT_FALSE(c.load("tower-2-2-1").has_value());
    c.store("tower-2-2-1", {{"rank", 6}});
    const auto j = c.load("tower-2-2-1");
    ASSERT_TRUE(j.has_value());
    EXPECT_EQ((*j)["rank"], 6);
    // keys are sanitized into file names
    c.store("chartable-GL_2(F_3)", {{"x", 1}});
    EXPECT_TRUE(c.load("chartable-GL_2(F_3)").has_value());
    for (const auto& e : std::filesystem::directory_iterator(d)) EXPECT_EQ(e.path().filename().string().find('('), std::string::npos);
    std::ofstream(d / "tower-2-2-1.json") << "{ truncated";
    EXPECT_FALSE(c.load("tower-2-2-1").has_value());
    EXPECT_EQ(c.hits(), 2);
    EXPECT_EQ(c.misses(), 2);
    Cache off("");
    off.store("k", 1);
    EXPECT_FALSE(off.load("k").has_value());
    std::filesystem::remove_all(d);
}

TEST(Render, Formats) {
    const nlohmann::json report = {{"schema", kReportSchema}, {"results", {{"rank", 6}, {"stages", {3, 2}}}}};
    CsvTable t{{"rank", "note"}, {{"6", "a,b"}}};
    EXPECT_EQ(render("csv", "tower", report, t), "# ltower-csv/1 tower\nrank,note\n6,\"a,b\"\n");
    EXPECT_EQ(render("text", "tower", report, t), "command: tower\nrank: 6\nstages: 3 2\n");
    EXPECT_EQ(nlohmann::json::parse(render("json", "tower", report, t)), report);
    EXPECT_THROW(render("xml", "tower", report, t), PreconditionError);
}
