// ads_sim: mesh export, time-domain runs, convergence sweeps and the check suite.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 runtime error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ads/checks.hpp"
#include "ads/pipeline.hpp"
#include "ads/vtk.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kRuntime = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void add_common_options(CLI::App& cmd, ads::SimConfig& c) {
  cmd.add_option("--J", c.J, "mesh level, h = 2^-J")->capture_default_str();
  cmd.add_option("--gamma", c.gamma, "impedance parameter")->capture_default_str();
  cmd.add_option("--tau", c.tau, "time step")->capture_default_str();
  cmd.add_option("--steps", c.steps, "number of time steps")->capture_default_str();
  cmd.add_option("--cg-tol", c.cg_tolerance, "CG relative tolerance")->capture_default_str();
  cmd.add_option("--minres-tol", c.minres_tolerance, "MINRES relative tolerance")->capture_default_str();
  cmd.add_flag("--jacobi", c.jacobi, "Jacobi-preconditioned solvers");
  cmd.add_flag("--eliminate-b", c.eliminate_b, "eliminate B and solve the smaller (E, p) system");
  cmd.add_flag("--zero-impedance", c.zero_impedance, "drop the boundary term (energy conserving)");
  cmd.add_flag("--negative-control", c.negative_control, "skip the projection of the initial field");
}

void validate(const ads::SimConfig& c) {
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

int cmd_mesh(const ads::SimConfig& c, const std::string& out_path) {
  validate(c);
  const auto mesh = ads::build_shell_mesh(ads::LatticeSpec{.J = c.J});
  const auto stats = ads::mesh_statistics(mesh);
  std::cout << "J: " << c.J << "\n";
  std::cout << "vertices: " << stats.total_vertices() << "\n";
  std::cout << "edges: " << stats.total_edges() << "\n";
  std::cout << "faces: " << stats.total_faces() << "\n";
  std::cout << "tets: " << stats.tets << "\n";
  std::cout << "tag        vertices    edges    faces\n";
  for (auto tag : {ads::BoundaryTag::Interior, ads::BoundaryTag::GammaI, ads::BoundaryTag::GammaO}) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-9s %9zu %8zu %8zu\n", std::string(ads::to_string(tag)).c_str(),
                  stats.vertices(tag), stats.edges(tag), stats.faces(tag));
    std::cout << buf;
  }
  const std::string path = out_path.empty() ? "mesh_J" + std::to_string(c.J) + ".vtk" : out_path;
  ads::write_vtk(mesh, path);
  std::cout << "wrote " << path << "\n";
  return kOk;
}

std::vector<ads::CellVectorField> cell_fields(const ads::Discretization& d, const ads::BlockVector& u) {
  using ads::operator*;
  using ads::operator+=;
  const ads::FieldEvaluator eval(d.mesh, d.dofs);
  ads::CellVectorField E{"E", {}}, B{"B", {}};
  for (std::size_t t = 0; t < d.mesh.num_tets(); ++t) {
    const auto& tv = d.mesh.tets[t];
    ads::Vec3 c{};
    for (int v : tv) c += d.mesh.vertices[v];
    c = 0.25 * c;
    E.values.push_back(eval.edge_field_in(t, u.E(), c));
    B.values.push_back(eval.face_field_in(t, u.B(), c));
  }
  return {E, B};
}

int cmd_run(ads::SimConfig c, const std::string& out_path) {
  validate(c);
  c.csv_path = out_path.empty() ? "ads_J" + std::to_string(c.J) + ".csv" : out_path;
  const auto disc = ads::Discretization::build(c);
  if (!c.dump_dir.empty()) {
    std::filesystem::create_directories(c.dump_dir);
    ads::dump_matrices(disc.matrices, disc.incidence, c.dump_dir);
  }
  const auto run = ads::run_pipeline(disc, c);
  {
    auto csv = open_output(c.csv_path);
    ads::write_csv(run.report, csv);
  }
  ads::write_console_table(run.report, std::cout);
  std::cout << "monitor: " << run.lemma.message << "\n";
  std::cout << "wrote " << c.csv_path << "\n";
  if (!c.vtk_path.empty()) {
    ads::write_vtk(disc.mesh, c.vtk_path, cell_fields(disc, run.final_state));
    std::cout << "wrote " << c.vtk_path << "\n";
  }
  return kOk;
}

int cmd_convergence(const ads::SimConfig& c, const std::vector<int>& levels, const std::string& out_path) {
  if (levels.empty()) throw UsageError("at least one level is required");
  for (int J : levels) {
    ads::SimConfig probe = c;
    probe.J = J;
    validate(probe);
  }
  const auto rows = ads::convergence_sweep(c, levels, &std::cout);
  const std::string path = out_path.empty() ? "convergence.csv" : out_path;
  {
    auto csv = open_output(path);
    ads::write_convergence_csv(rows, csv);
  }
  ads::write_convergence_csv(rows, std::cout);
  std::cout << "wrote " << path << "\n";
  for (const auto& r : rows)
    if (!r.final_energy) return kRuntime;
  return kOk;
}

int cmd_check(const ads::SimConfig& c) {
  validate(c);
  const auto report = ads::run_checks(c, &std::cout);
  const bool ok = report.all_passed();
  std::cout << (ok ? "all checks passed" : "some checks failed") << "\n";
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maxwell ADS simulator on a spherical shell"};
  app.require_subcommand(1);

  ads::SimConfig config;
  std::string out_path;
  std::vector<int> levels{3, 4};

  auto* mesh = app.add_subcommand("mesh", "build the mesh, print statistics, write VTK");
  add_common_options(*mesh, config);
  mesh->add_option("--out", out_path, "VTK output path (default mesh_J<J>.vtk)");

  auto* run = app.add_subcommand("run", "run the time-domain simulation");
  add_common_options(*run, config);
  run->add_option("--out", out_path, "CSV output path (default ads_J<J>.csv)");
  run->add_option("--vtk", config.vtk_path, "write the final E and B per cell");
  run->add_option("--dump-matrices", config.dump_dir, "directory for triplet matrix dumps");

  auto* conv = app.add_subcommand("convergence", "final energy for several mesh levels");
  add_common_options(*conv, config);
  conv->add_option("--levels", levels, "mesh levels")->delimiter(',')->capture_default_str();
  conv->add_option("--out", out_path, "CSV output path (default convergence.csv)");

  auto* check = app.add_subcommand("check", "run the property suite");
  add_common_options(*check, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (mesh->parsed()) return cmd_mesh(config, out_path);
    if (run->parsed()) return cmd_run(config, out_path);
    if (conv->parsed()) return cmd_convergence(config, levels, out_path);
    if (check->parsed()) return cmd_check(config);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
