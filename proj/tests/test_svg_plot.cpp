#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "jamnet/bench.hpp"
#include "jamnet/svg_plot.hpp"

using namespace jamnet;
using namespace jamnet::svg_plot;

namespace {

bench::ResultRow srow(const std::string& exp, int trial, double lambda, int M, int N,
                      double payoff) {
  bench::ResultRow r;
  r.experiment = exp;
  r.trial = trial;
  r.lambda = lambda;
  r.M = M;
  r.N = N;
  r.leader_payoff = payoff;
  r.jamfree_payoff = payoff;
  return r;
}

std::string sweep_csv() {
  std::vector<bench::ResultRow> rows;
  for (int trial = 0; trial < 2; ++trial) {
    for (double lam : {0.0, 0.5, 1.0}) {
      rows.push_back(srow("sweep", trial, lam, 2, 4, 2.0 + lam + 0.1 * trial));
      rows.push_back(srow("sweep", trial, lam, 2, 6, 3.0 + lam + 0.1 * trial));
    }
  }
  return bench::rows_to_csv(rows);
}

int count_of(const std::string& text, const std::string& needle) {
  int count = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TEST_CASE("plot kinds parse by name") {
  CHECK(kind_from_string("sweep") == PlotKind::sweep);
  CHECK(kind_from_string("scaling") == PlotKind::scaling);
  CHECK(kind_from_string("gateways") == PlotKind::gateways);
  CHECK(kind_from_string("fictitious") == PlotKind::fictitious);
  CHECK_THROWS_AS(kind_from_string("pie"), std::invalid_argument);
}

TEST_CASE("sweep charts draw one averaged series per sensor count") {
  PlotSpec spec;
  const std::string svg = render_plot(sweep_csv(), spec);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count_of(svg, "<polyline") == 2);  // N = 4 and N = 6
  CHECK(svg.find("N=4") != std::string::npos);
  CHECK(svg.find("N=6") != std::string::npos);
}

TEST_CASE("identical csv bytes render to identical svg bytes") {
  PlotSpec spec;
  spec.title = "repeatability probe";
  const std::string csv = sweep_csv();
  CHECK(render_plot(csv, spec) == render_plot(csv, spec));
  CHECK(render_plot(csv, spec).find("repeatability probe") != std::string::npos);
}

TEST_CASE("gateway charts key series on the gateway count") {
  std::vector<bench::ResultRow> rows;
  for (double lam : {0.0, 1.0}) {
    rows.push_back(srow("gateways", 0, lam, 1, 4, 1.0 + lam));
    rows.push_back(srow("gateways", 0, lam, 2, 4, 2.0 + lam));
    rows.push_back(srow("gateways", 0, lam, 4, 4, 3.0 + lam));
  }
  PlotSpec spec;
  spec.kind = PlotKind::gateways;
  const std::string svg = render_plot(bench::rows_to_csv(rows), spec);
  CHECK(count_of(svg, "<polyline") == 3);
  CHECK(svg.find("M=1") != std::string::npos);
  CHECK(svg.find("M=4") != std::string::npos);
}

TEST_CASE("fictitious charts plot the payoff per round") {
  const std::string csv =
      "round,leader_payoff,n_victims,converged,cycle_length\n"
      "0,4.5,2,0,\n"
      "1,5.0,1,0,\n"
      "2,4.75,2,0,\n";
  PlotSpec spec;
  spec.kind = PlotKind::fictitious;
  const std::string svg = render_plot(csv, spec);
  CHECK(count_of(svg, "<polyline") == 1);
}

TEST_CASE("rows with unusable payoffs are skipped, not plotted") {
  std::vector<bench::ResultRow> rows;
  rows.push_back(srow("sweep", 0, 0.0, 2, 4, 1.0));
  rows.push_back(srow("sweep", 0, 1.0, 2, 4, 2.0));
  bench::ResultRow broken = srow("sweep", 0, 0.5, 2, 6, 0.0);
  broken.leader_payoff = std::nan("");
  broken.failed = true;
  rows.push_back(broken);

  PlotSpec spec;
  const std::string svg = render_plot(bench::rows_to_csv(rows), spec);
  CHECK(count_of(svg, "<polyline") == 1);  // the N=6 series had no clean rows

  // nothing plottable at all
  std::vector<bench::ResultRow> all_bad = {broken};
  CHECK_THROWS_AS(render_plot(bench::rows_to_csv(all_bad), spec), std::invalid_argument);
}

TEST_CASE("header-only and column-missing inputs are format errors") {
  PlotSpec spec;
  CHECK_THROWS_AS(render_plot(bench::rows_to_csv({}), spec), std::invalid_argument);
  CHECK_THROWS_AS(render_plot("foo,bar\n1,2\n", spec), std::invalid_argument);
  CHECK_THROWS_AS(render_plot("", spec), std::invalid_argument);
}

TEST_CASE("emit_plot writes only on success") {
  const std::string csv_path = "test_plot_input.csv";
  const std::string out_path = "test_plot_output.svg";
  std::remove(out_path.c_str());

  {
    std::ofstream f(csv_path);
    f << sweep_csv();
  }
  PlotSpec spec;
  emit_plot(csv_path, spec, out_path);
  REQUIRE(file_exists(out_path));
  {
    std::ifstream f(out_path);
    std::string head;
    f >> head;
    CHECK(head == "<svg");
  }
  std::remove(out_path.c_str());

  {
    std::ofstream f(csv_path);
    f << "foo,bar\n1,2\n";
  }
  CHECK_THROWS(emit_plot(csv_path, spec, out_path));
  CHECK(!file_exists(out_path));

  CHECK_THROWS_AS(emit_plot("missing_input.csv", spec, out_path), std::runtime_error);
  CHECK(!file_exists(out_path));

  std::remove(csv_path.c_str());
}
