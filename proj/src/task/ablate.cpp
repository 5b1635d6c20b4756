#include "qiren/task/ablate.hpp"

#include <fstream>

namespace qiren {

static std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<AblationCell> ablation_cells(const ModelConfig& base) {
  std::vector<AblationCell> cells;
  auto add = [&](const std::string& axis, const std::string& value,
                 ModelConfig cfg) {
    cells.push_back({axis, value, std::move(cfg)});
  };

  for (bool on : {true, false}) {
    ModelConfig c = base;
    c.batchnorm = on;
    add("batchnorm", on ? "on" : "off", c);
  }
  for (int L : {1, 2, 3, 4}) {
    ModelConfig c = base;
    c.reuploads = L;
    add("reuploads", std::to_string(L), c);
  }
  for (double nb : {0.0, 0.05, 0.10, 0.15}) {
    ModelConfig c = base;
    c.noise_bound = nb;
    add("noise", fmt(nb), c);
  }
  for (Entangler e : {Entangler::CNOT, Entangler::CZ}) {
    ModelConfig c = base;
    c.entangler = e;
    add("entangler", e == Entangler::CNOT ? "cnot" : "cz", c);
  }
  for (Family f : {Family::Qiren, Family::PureQuantum}) {
    ModelConfig c = ModelConfig::defaults(f, base.in_dim, base.out_dim);
    c.noise_bound = base.noise_bound;
    add("family", family_name(f), c);
  }
  return cells;
}

std::vector<AblationResult> run_ablation(const ModelConfig& base,
                                         const Dataset& ds,
                                         const TrainOptions& opt) {
  std::vector<AblationResult> out;
  for (const AblationCell& cell : ablation_cells(base)) {
    AblationResult r;
    r.cell = cell;
    try {
      r.report = train_once(cell.config, ds, opt).report;
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_ablation_csv(const std::string& path,
                        const std::vector<AblationResult>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "axis,value,params,final_mse,last_train_loss,error\n";
  out.precision(17);
  for (const AblationResult& r : rows) {
    out << r.cell.axis << ',' << r.cell.value << ',';
    if (r.ok) {
      out << r.report.params << ',' << r.report.final_mse << ','
          << (r.report.loss_curve.empty() ? 0.0 : r.report.loss_curve.back())
          << ',';
    } else {
      out << ",,,";
    }
    // commas in error text would shift columns
    std::string msg = r.error;
    for (char& ch : msg)
      if (ch == ',' || ch == '\n') ch = ';';
    out << msg << '\n';
  }
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace qiren
