#include <doctest.h>

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ads/pipeline.hpp"

using namespace ads;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("config validation") {
    SimConfig c;
    CHECK_NOTHROW(c.validate());
    for (auto bad : std::vector<std::function<void(SimConfig&)>>{
             [](SimConfig& s) { s.J = 1; }, [](SimConfig& s) { s.J = 8; }, [](SimConfig& s) { s.gamma = 0.0; },
             [](SimConfig& s) { s.tau = 0.0; }, [](SimConfig& s) { s.steps = -1; },
             [](SimConfig& s) { s.minres_tolerance = 0.0; }, [](SimConfig& s) { s.cg_tolerance = -1.0; }}) {
      SimConfig b;
      bad(b);
      CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    }
  }

  TEST_CASE("CSV layout") {
    SimConfig c;
    c.J = 2;
    c.steps = 3;
    const auto disc = Discretization::build(c);
    const auto run = run_pipeline(disc, c);
    std::ostringstream out;
    write_csv(run.report, out);
    const auto l = lines(out.str());
    REQUIRE(l.size() == 5);
    CHECK(l[0] == kCsvHeader);
    CHECK(l[1].rfind("0,0", 0) == 0);
    for (std::size_t i = 1; i < l.size(); ++i) CHECK(std::count(l[i].begin(), l[i].end(), ',') == 7);

    std::ostringstream table;
    write_console_table(run.report, table);
    CHECK(lines(table.str()).size() >= 4);
  }

  TEST_CASE("zero steps writes only the initial row") {
    SimConfig c;
    c.J = 2;
    c.steps = 0;
    const auto run = run_pipeline(Discretization::build(c), c);
    REQUIRE(run.report.records.size() == 1);
    CHECK(run.report.records[0].minres_iterations == 0);
  }

  TEST_CASE("runs are bit-for-bit reproducible") {
    SimConfig c;
    c.steps = 3;
    std::string first;
    for (int k = 0; k < 2; ++k) {
      const auto run = run_pipeline(Discretization::build(c), c);
      std::ostringstream out;
      write_csv(run.report, out);
      if (k == 0)
        first = out.str();
      else
        CHECK(out.str() == first);
    }
  }

  TEST_CASE("initial data") {
    SimConfig c;
    const auto disc = Discretization::build(c);
    const auto init = make_initial_data(disc, c);
    CHECK(init.E_interpolant.size() == disc.dofs.num_edge_dofs());
    CHECK(init.projection.gradient_residual <= 1e-10);
    for (double v : init.u0.p()) CHECK(v == 0.0);
    c.negative_control = true;
    const auto raw = make_initial_data(disc, c);
    CHECK(std::equal(raw.u0.E().begin(), raw.u0.E().end(), raw.E_interpolant.begin()));
  }

  TEST_CASE("convergence sweep keeps going past a failing level") {
    SimConfig c;
    c.steps = 2;
    const auto rows = convergence_sweep(c, {2, 1, 3});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].final_energy.has_value());
    CHECK_FALSE(rows[1].final_energy.has_value());
    CHECK_FALSE(rows[1].error.empty());
    CHECK(rows[2].final_energy.has_value());
    CHECK(rows[0].h > rows[2].h);
    std::ostringstream out;
    write_convergence_csv(rows, out);
    CHECK(lines(out.str()).size() == 4);
  }
}
