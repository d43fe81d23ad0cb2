#include "replicator/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace replicator;
namespace rio = replicator::io;

TEST(FormatDouble, SeventeenDigitsRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        const std::string s = rio::format_double(v);
        EXPECT_EQ(std::stod(s), v) << s;
    }
    EXPECT_EQ(rio::format_double(0.1), "0.10000000000000001");
}

TEST(ParseVectorList, AcceptsWhitespace) {
    const Vector v = rio::parse_vector_list(" 0.9, 0.1 ");
    ASSERT_EQ(v.size(), 2);
    EXPECT_EQ(v[0], 0.9);
    EXPECT_EQ(v[1], 0.1);
    EXPECT_THROW(rio::parse_vector_list("1,,2"), ArgumentError);
    EXPECT_THROW(rio::parse_vector_list("1,x"), ArgumentError);
    EXPECT_THROW(rio::parse_vector_list("1,2,"), ArgumentError);
}

TEST(ModelJson, RoundTripEachVariant) {
    const std::vector<FitnessModel> models{FitnessModel::constant(Vector{{1.0, 2.0}}),
                                           FitnessModel::linear(Matrix{{4.0, 0.0}, {5.0, 3.0}}),
                                           FitnessModel::generator(Matrix{{-1.0, 2.0}, {1.0, -2.0}})};
    for (const auto& m : models) {
        const auto j = rio::model_to_json(m);
        const auto back = rio::model_from_json(rio::Json::parse(j.dump()));
        EXPECT_EQ(back.kind(), m.kind());
        EXPECT_EQ(rio::model_to_json(back), j);
    }
    EXPECT_THROW(rio::model_to_json(FitnessModel::custom(2, [](const Vector& x) { return x; })), ArgumentError);
}

TEST(ModelJson, ValidationErrors) {
    EXPECT_THROW(rio::model_from_json(rio::Json::parse(R"({"a":[1,2]})")), ArgumentError);
    EXPECT_THROW(rio::model_from_json(rio::Json::parse(R"({"type":"quadratic"})")), ArgumentError);
    EXPECT_THROW(rio::model_from_json(rio::Json::parse(R"({"type":"linear","B":[[1,2],[3]]})")), ArgumentError);
    EXPECT_THROW(rio::model_from_json(rio::Json::parse(R"({"type":"linear","B":[[1,2],[3,"x"]]})")), ArgumentError);
    EXPECT_THROW(rio::model_from_json(rio::Json::parse(R"({"type":"generator","R":[[1,0],[0,1]]})")), ArgumentError);
    EXPECT_THROW(rio::model_from_json(rio::Json::parse(R"({"type":"constant"})")), ArgumentError);
}

TEST(TrajectoryCsv, RoundTripIsByteIdentical) {
    const auto traj = integrate_replicator(FitnessModel::linear(Matrix{{4.0, 0.0}, {5.0, 3.0}}),
                                           SimplexPoint(Vector{{0.9, 0.1}}), 1e-2, 1.0);
    std::ostringstream first;
    rio::write_trajectory_csv(first, traj);
    std::istringstream in(first.str());
    const auto parsed = rio::read_trajectory_csv(in);
    std::ostringstream second;
    rio::write_trajectory_csv(second, parsed);
    EXPECT_EQ(first.str(), second.str());
    EXPECT_EQ(parsed.size(), traj.size());
    EXPECT_EQ(first.str().substr(0, 8), "t,x1,x2\n");
}

TEST(TrajectoryCsv, RejectsMalformedInput) {
    std::istringstream bad_header("time,x1,x2\n0,0.5,0.5\n");
    EXPECT_THROW(rio::read_trajectory_csv(bad_header), ArgumentError);
    std::istringstream short_row("t,x1,x2\n0,0.5\n");
    EXPECT_THROW(rio::read_trajectory_csv(short_row), ArgumentError);
    std::istringstream off_simplex("t,x1,x2\n0,0.7,0.7\n");
    EXPECT_THROW(rio::read_trajectory_csv(off_simplex), ArgumentError);
}

TEST(PhaseCsv, RoundTripIsByteIdentical) {
    const auto f = FitnessModel::linear(Matrix{{4.0, 0.0}, {5.0, 3.0}});
    const auto traj = integrate_hamiltonian(f, Vector::Constant(1, 0.6), Vector::Zero(1), 1e-2, 0.5);
    std::ostringstream first;
    rio::write_phase_csv(first, traj);
    std::istringstream in(first.str());
    const auto parsed = rio::read_phase_csv(in);
    std::ostringstream second;
    rio::write_phase_csv(second, parsed);
    EXPECT_EQ(first.str(), second.str());
    EXPECT_EQ(first.str().substr(0, 9), "t,y1,p1,H");
}

TEST(ReportJson, ControllabilityShape) {
    const auto rep = controllability_verdict(Vector{{1.0, 2.0, 3.0}}, Matrix::Identity(3, 3), 4, 0);
    const auto j = rio::to_json(rep);
    for (const char* key : {"hypotheses", "bundle", "samples", "verdict"}) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j["bundle"].contains("dets"));
    EXPECT_TRUE(j["bundle"].contains("r_rows"));
    EXPECT_TRUE(j["bundle"].contains("sigma_min_R"));
    ASSERT_EQ(j["samples"].size(), 4u);
    for (const char* key : {"x", "chosen_k", "rank", "verdict"}) EXPECT_TRUE(j["samples"][0].contains(key)) << key;
    EXPECT_EQ(j["verdict"], "controllable");
}

TEST(ReportJson, PeriodicNullsWhenMissing) {
    const auto j = rio::to_json(detect_periodic_orbit(Matrix{{4.0, 0.0}, {5.0, 3.0}}, -2.0));
    EXPECT_TRUE(j["return_distance"].is_null());
    EXPECT_EQ(j["verdict"], "not-detected");
}
