#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "waveuio/errors.hpp"
#include "waveuio/io.hpp"
#include "waveuio/series_csv.hpp"

namespace waveuio {
namespace {

using testing::two_channel_observer;
using testing::two_channel_system;

TEST(Json, MatrixRoundTrip) {
  Matrix m(2, 3);
  m << 1, 2.5, -3, 0.1, 1e-300, 7;
  EXPECT_EQ(matrix_from_json(matrix_to_json(m), "m"), m);
  const Matrix v = matrix_from_json(Json::parse("[1, 2, 3]"), "v");
  EXPECT_EQ(v.rows(), 3);
  EXPECT_EQ(v.cols(), 1);
  EXPECT_THROW(matrix_from_json(Json::parse("[[1, 2], [3]]"), "ragged"), ConfigError);
  EXPECT_THROW(matrix_from_json(Json::parse("\"x\""), "text"), ConfigError);
}

TEST(Json, SystemRoundTrip) {
  const auto s = two_channel_system();
  const auto back = system_from_json(to_json(s));
  EXPECT_EQ(back.A, s.A);
  EXPECT_EQ(back.C1, s.C1);
  EXPECT_EQ(back.F, s.F);
  EXPECT_EQ(back.nonlinearity.kind, s.nonlinearity.kind);
  EXPECT_EQ(back.nonlinearity.amplitudes, s.nonlinearity.amplitudes);
  EXPECT_EQ(back.gamma, s.gamma);
  EXPECT_TRUE(validate_system(back).ok());
}

TEST(Json, SystemMissingKey) {
  Json j = to_json(two_channel_system());
  j.erase("H");
  EXPECT_THROW(system_from_json(j), ConfigError);
}

TEST(Json, ObserverRoundTrip) {
  const auto o = two_channel_observer();
  const auto back = observer_from_json(to_json(o));
  EXPECT_EQ(back.L, o.L);
  EXPECT_EQ(back.T, o.T);
  EXPECT_EQ(back.Q, o.Q);
}

TEST(Json, CertificateForms) {
  const auto scalar = certificate_from_json(
      Json::parse(R"({"p": 2.5, "g": 0.8888888888888888, "delta": 0.25, "mu": 0.95})"), 2);
  EXPECT_EQ(scalar.P, 2.5 * Matrix::Identity(2, 2));
  EXPECT_EQ(*scalar.mu, 0.95);
  const auto full = certificate_from_json(to_json(scalar), 2);
  EXPECT_EQ(full.P, scalar.P);
  EXPECT_EQ(full.Gamma, scalar.Gamma);
  EXPECT_EQ(full.delta, 0.25);
  const auto no_mu = certificate_from_json(Json::parse(R"({"p": 1, "g": 0.5, "delta": 0.1})"), 2);
  EXPECT_FALSE(no_mu.mu.has_value());
  EXPECT_THROW(certificate_from_json(to_json(scalar), 3), ShapeError);
}

TEST(Json, ScenarioBuiltinWithOverrides) {
  const auto s = two_channel_system();
  const auto sc = scenario_from_json(
      Json::parse(R"({"builtin": "paper-d0", "grid": {"nx": 40, "dt": 0.02, "tfinal": 1}})"), s);
  EXPECT_EQ(sc.grid.nx, 40);
  EXPECT_EQ(sc.initial.w0.cols(), 41);
  EXPECT_TRUE(sc.certificate.has_value());
  const auto no_cert =
      scenario_from_json(Json::parse(R"({"builtin": "paper-dsin", "certificate": null})"), s);
  EXPECT_FALSE(no_cert.certificate.has_value());
  EXPECT_EQ(no_cert.disturbance.kind, DisturbanceKind::DampedSine);
}

TEST(Json, ScenarioExplicitArrays) {
  const auto s = two_channel_system();
  Json j;
  j["grid"] = {{"nx", 4}, {"dt", 0.01}, {"tfinal", 0.05}};
  const Json field = {{0, 0.1, 0.2, 0.1, 0}, {0, 0, 0, 0, 0}};
  j["initial"] = {{"w0", field}, {"w1", field}, {"z0", field}, {"z1", field}};
  j["disturbance"] = {{"kind", "sampled"}, {"times", {0, 1}}, {"values", {0, 1}}};
  j["control"] = {{"kind", "integral_state_feedback"}, {"K1", {{0.5, 0.5}}}};
  const auto sc = scenario_from_json(j, s);
  EXPECT_EQ(sc.initial.observer_form, ObserverInitForm::Internal);
  EXPECT_EQ(sc.initial.w0(0, 2), 0.2);
  EXPECT_DOUBLE_EQ(eval_disturbance(sc.disturbance, 0.5)(0), 0.5);
  EXPECT_FALSE(sc.certificate.has_value());
  EXPECT_THROW(scenario_from_json(Json::parse(R"({"grid": {"nx": 4}})"), s), ConfigError);
  EXPECT_THROW(scenario_from_json(Json::parse(R"({"builtin": "nope"})"), s), ConfigError);
}

TEST(Csv, FormatRoundTrips) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(rng) * std::pow(10.0, (k % 40) - 20);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(Csv, SeriesLayout) {
  SimResult r;
  r.times = {0.0, 0.5};
  r.e_norm = {1.0, 0.5};
  r.eps_norm = {0.9, 0.4};
  r.d_norm = {0.0, 0.1};
  r.int_e_sq = {0.0, 0.3};
  r.int_d_sq = {0.0, 0.0025};
  std::ostringstream os;
  write_series_csv(os, r);
  EXPECT_EQ(os.str(),
            "t,e_norm,eps_norm,xi,d_norm,int_e_sq,int_d_sq\n"
            "0,1,0.9,nan,0,0,0\n"
            "0.5,0.5,0.4,nan,0.1,0.3,0.0025\n");
  std::istringstream is(os.str());
  const auto table = read_csv(is);
  EXPECT_EQ(table.rows, 2u);
  EXPECT_TRUE(std::isnan(table.at("xi")[0]));
  EXPECT_EQ(table.at("int_d_sq")[1], 0.0025);
}

TEST(Csv, SnapshotLayout) {
  SimResult r;
  r.x = {0.0, 1.0};
  Snapshot s;
  s.t = 0.25;
  s.w = Matrix::Zero(2, 2);
  s.what = Matrix::Ones(2, 2);
  s.e = s.what - s.w;
  s.z = s.what;
  r.snapshots.push_back(s);
  std::ostringstream os;
  write_snapshots_csv(os, r);
  std::istringstream is(os.str());
  const auto table = read_csv(is);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), kSnapshotHeader);
  EXPECT_EQ(table.rows, 4u);
  EXPECT_EQ(table.at("comp")[1], 1.0);
}

TEST(Csv, RejectsRaggedAndGarbage) {
  std::istringstream ragged("a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(ragged), ConfigError);
  std::istringstream garbage("a,b\n1,x\n");
  EXPECT_THROW(read_csv(garbage), ConfigError);
}

}  // namespace
}  // namespace waveuio
