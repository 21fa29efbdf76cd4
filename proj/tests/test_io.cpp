#include <gtest/gtest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>

#include "phononforge/io.hpp"
#include "phononforge/sampling.hpp"

namespace pf = phononforge;
namespace io = phononforge::io;
using pf::cplx;

TEST(Io, DoubleFormatRoundTripsExactly) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int k = 0; k < 10000; ++k) {
    double v;
    const std::uint64_t b = bits(rng);
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const double back = std::strtod(io::format_double(v).c_str(), nullptr);
    EXPECT_EQ(std::memcmp(&back, &v, sizeof v), 0) << io::format_double(v);
  }
  EXPECT_EQ(io::format_double(0.1), "1.0000000000000001e-01");
}

TEST(Io, StateSchemaAndRoundTrip) {
  std::mt19937_64 rng(11);
  const pf::PureState s = pf::sampling::random_state(rng, 7, 7);
  const std::string text = io::dump(io::to_json(s));
  const io::json j = io::parse(text, "mem");
  EXPECT_EQ(j["dim"], 7);
  ASSERT_EQ(j["amps"].size(), 7u);
  EXPECT_EQ(j["amps"][0].size(), 2u);
  const pf::PureState back = io::state_from_json(j);
  for (std::size_t n = 0; n < 7; ++n) EXPECT_EQ(back[n], s[n]);
  EXPECT_EQ(io::dump(io::to_json(back)), text);
}

TEST(Io, VacuumState) {
  const io::json j = io::parse(io::dump(io::to_json(pf::PureState::fock(0, 8))), "mem");
  EXPECT_EQ(j["amps"][0][0], 1.0);
  EXPECT_EQ(j["amps"][0][1], 0.0);
}

TEST(Io, StateValidation) {
  EXPECT_THROW(io::state_from_json(io::parse(R"({"dim": 2, "amps": [[1, 0]]})", "mem")), pf::InvalidArgument);
  EXPECT_THROW(io::state_from_json(io::parse(R"({"dim": 0, "amps": []})", "mem")), pf::InvalidArgument);
  EXPECT_THROW(io::state_from_json(io::parse(R"({"dim": 1, "amps": [[1]]})", "mem")), pf::InvalidArgument);
  EXPECT_THROW(io::parse("{nope", "mem"), pf::IoError);
  EXPECT_THROW(io::read_text("/nonexistent/dir/file.json"), pf::IoError);
}

TEST(Io, HeraldSpecRoundTrip) {
  pf::HeraldSpec s;
  s.theta_half = 0.1;
  s.r = 0.2;
  s.mu = {0.3, -0.4};
  s.phi = 1.0;
  s.varphi = -2.0;
  s.detection = pf::Detection::v;
  const pf::HeraldSpec b = io::herald_from_json(io::parse(io::dump(io::to_json(s)), "mem"));
  EXPECT_EQ(b.theta_half, s.theta_half);
  EXPECT_EQ(b.r, s.r);
  EXPECT_EQ(b.mu, s.mu);
  EXPECT_EQ(b.phi, s.phi);
  EXPECT_EQ(b.varphi, s.varphi);
  EXPECT_EQ(b.detection, s.detection);
  EXPECT_THROW(io::herald_from_json(io::parse(R"({"detection": "x"})", "mem")), pf::InvalidArgument);
}

TEST(Io, PlanRoundTrip) {
  pf::TransformPlan p;
  p.coeffs = {{1.0, 0.5}, {0.0, 0.0}, {0.25, -1.0 / 3.0}};
  p.steps = {{1.0, {0.1, 0.2}}, {1.0, {-0.3, 0.7}}, {1.0, 0.0}};
  p.scale = {2.0, -0.1};
  p.predicted_probability = 0.123456789;
  const std::string text = io::dump(io::to_json(p));
  const io::json j = io::parse(text, "mem");
  for (const char* key : {"coeffs", "steps", "scale", "predicted_probability"}) EXPECT_TRUE(j.contains(key));
  const pf::TransformPlan b = io::plan_from_json(j);
  EXPECT_EQ(b.degree, 2u);
  EXPECT_EQ(b.coeffs, p.coeffs);
  EXPECT_EQ(b.scale, p.scale);
  EXPECT_EQ(b.predicted_probability, p.predicted_probability);
  EXPECT_EQ(io::dump(io::to_json(b)), text);
}

TEST(Io, GridCsv) {
  const pf::PhaseSpaceGrid g = pf::wigner_grid(pf::PureState::fock(0, 4), pf::GridSpec::square(0.1, 0.1));
  const std::string csv = io::grid_to_csv(g);
  EXPECT_EQ(csv.substr(0, 6), "x,p,w\n");
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  EXPECT_EQ(lines, 1u + 9u);
  const io::json j = io::to_json(g);
  EXPECT_EQ(j["values"].size(), 9u);
  EXPECT_EQ(j["xs"].size(), 3u);
}

TEST(Io, ParamsStrictKeys) {
  EXPECT_THROW(io::params_from_json(io::parse(R"({"finess": 1})", "mem")), pf::InvalidArgument);
  const pf::ExperimentParams p = io::params_from_json(io::parse(R"({"finesse": 1e3, "detuning_sign": "red"})", "mem"));
  EXPECT_EQ(p.finesse, 1e3);
  EXPECT_EQ(p.detuning_sign, pf::DetuningSign::red);
  EXPECT_EQ(p.cavity_length, pf::ExperimentParams{}.cavity_length);
  const pf::ExperimentParams d;
  const pf::ExperimentParams back = io::params_from_json(io::parse(io::dump(io::to_json(d)), "mem"));
  EXPECT_EQ(back.mech_freq, d.mech_freq);
  EXPECT_EQ(back.visibility, d.visibility);
}

TEST(Io, FileRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "pf_io_state.json").string();
  const pf::PureState s = pf::gaussian_state({{0.3, 0.1}, 0.1, 0.0}, 12);
  io::write_state(path, s);
  const pf::PureState b = io::read_state(path);
  for (std::size_t n = 0; n < 12; ++n) EXPECT_EQ(b[n], s[n]);
  std::remove(path.c_str());
  EXPECT_THROW(io::write_state("/nonexistent/dir/x.json", s), pf::IoError);
}
