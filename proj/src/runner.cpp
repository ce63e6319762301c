#include "espdg/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "espdg/diagnostics.hpp"
#include "espdg/time.hpp"
#include "espdg/vtk.hpp"
#include "json.hpp"

namespace espdg {

namespace {

class DiagnosticsCsv {
 public:
  explicit DiagnosticsCsv(const std::string &path) : out_(path) {
    if (!out_) throw Error("cannot write diagnostics CSV: " + path);
    out_ << "t,E_total,dEdt,dissipation,remainder,surface_fw,Xc_x,Xc_y,Vc_x,Vc_y,area\n";
    out_.precision(17);
  }
  void row(const EntropyReport &rep, const BubbleObservables &bub) {
    out_ << rep.t << "," << rep.e_total << "," << rep.dedt << "," << rep.dissipation << ","
         << rep.remainder << "," << rep.surface_fw << "," << bub.xc.x << "," << bub.xc.y << ","
         << bub.vc.x << "," << bub.vc.y << "," << bub.area << "\n";
  }
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

}  // namespace

RunResult run_case(const CaseConfig &cfg) {
  namespace fs = std::filesystem;
  Problem prob = make_problem(cfg);
  const Mesh &mesh = prob.mesh;
  DgOperator op(mesh, prob.params);

  fs::create_directories(cfg.output.dir);
  const std::string dir = cfg.output.dir;
  save_config(prob.cfg, dir + "/config.json");
  DiagnosticsCsv csv(dir + "/diagnostics.csv");

  Field q = prob.q0;
  Field dqdt(mesh);
  OperatorOptions opt = prob.options();

  const double dt = cfg.integrator.dt;
  const long nsteps = cfg.t_final > 0.0 ? std::lround(cfg.t_final / dt) : 0;

  std::unique_ptr<ImplicitChOperator> implicit;
  std::unique_ptr<ImexBdfIntegrator> imex;
  std::unique_ptr<Rk3Integrator> rk3;
  if (cfg.integrator.kind == "imex" && nsteps > 0) {
    implicit = std::make_unique<ImplicitChOperator>(op, prob.params.kappa_beta);
    imex = std::make_unique<ImexBdfIntegrator>(op, *implicit, cfg.integrator.order, dt, opt);
  } else {
    rk3 = std::make_unique<Rk3Integrator>(op, opt);
  }

  RunResult res;
  res.out_dir = dir;
  double t = 0.0;
  Field last_good = q;
  double last_good_t = 0.0;
  int last_good_step = 0;

  auto diagnose = [&](double tn) {
    opt.time = tn;
    op.eval_residual(q, dqdt, opt);
    const EntropyReport rep = entropy_report(op, q, dqdt, opt, tn);
    BubbleObservables bub{};
    if (prob.track_bubble) bub = bubble_observables(mesh, q, prob.params);
    csv.row(rep, bub);
    res.max_entropy = std::max(res.max_entropy, rep.e_total);
    res.final_entropy = rep.e_total;
    return rep;
  };

  auto snapshot = [&](const std::string &tag, double tn, int step) {
    if (!cfg.output.write_fields) return;
    op.compute_concentration_gradient(q, opt);
    op.compute_chemical_potential(q, opt);
    write_vtk(mesh, q, op.mu(), prob.params, dir + "/fields_" + tag + ".vtk");
    write_restart(dir + "/restart_" + tag + ".bin", q, tn, step);
  };

  int exit_code = 0;
  long step = 0;
  try {
    diagnose(0.0);
    snapshot("0000000", 0.0, 0);
    for (step = 0; step < nsteps; ++step) {
      if (imex)
        imex->step(q, t);
      else
        rk3->step(q, t, dt);
      t = (step + 1) * dt;
      if (q.find_nan() >= 0) throw Error("solution is not finite");
      last_good = q;
      last_good_t = t;
      last_good_step = static_cast<int>(step + 1);
      if (cfg.output.cadence_steps > 0 && (step + 1) % cfg.output.cadence_steps == 0)
        diagnose(t);
      if (cfg.output.field_cadence > 0 && (step + 1) % cfg.output.field_cadence == 0) {
        char tag[16];
        std::snprintf(tag, sizeof(tag), "%07ld", step + 1);
        snapshot(tag, t, static_cast<int>(step + 1));
      }
    }
    if (nsteps > 0 && (cfg.output.cadence_steps <= 0 || nsteps % cfg.output.cadence_steps != 0))
      diagnose(t);
    snapshot("final", t, static_cast<int>(nsteps));
  } catch (const Error &err) {
    exit_code = 2;
    csv.flush();
    std::swap(q.raw(), last_good.raw());
    if (cfg.output.write_fields)
      write_restart(dir + "/restart_lastgood.bin", q, last_good_t, last_good_step);
    std::ofstream log(dir + "/failure.txt");
    log << "step " << step << ": " << err.what() << "\n";
  }

  res.exit_code = exit_code;
  res.t_end = exit_code == 0 ? t : last_good_t;
  res.steps = exit_code == 0 ? nsteps : last_good_step;
  res.final_velocity_norm = velocity_norm(mesh, q, prob.params);

  nlohmann::json summary;
  summary["case"] = prob.cfg.case_name;
  summary["seed"] = prob.cfg.seed;
  summary["exit_code"] = res.exit_code;
  summary["steps"] = res.steps;
  summary["t_end"] = res.t_end;
  summary["dt"] = dt;
  summary["flux_mode"] = prob.cfg.flux_mode;
  summary["final_entropy"] = res.final_entropy;
  summary["max_entropy"] = res.max_entropy;
  summary["final_velocity_norm"] = res.final_velocity_norm;
  summary["physics"] = nlohmann::json::parse(serialize_config(prob.cfg))["physics"];
  std::ofstream manifest(dir + "/summary.json");
  manifest << summary.dump(2) << "\n";
  return res;
}

}  // namespace espdg
