#include "fpv/driver.hpp"

#include "fpv/fpsem.hpp"
#include "fpv/parser.hpp"
#include "fpv/precond.hpp"
#include "fpv/typer.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace fpv {

WidthConfig brute_force_widths() {
  WidthConfig w;
  w.fp_formats = {fp8_format()};
  w.int_widths = {4, 8};
  return w;
}

namespace {

struct Job {
  size_t file = 0, transform = 0;
  const Transform *t = nullptr;
  TypeAssignment ta;
  CcAssignment cca;
  bool cross = false;
  std::string dump_stem;
};

struct Outcome {
  InstanceResult instance;
  // Cross-check jobs only.
  bool agreed = false;
  std::string skipped, disagreement;
};

std::string sanitize(const std::string &s) {
  std::string out;
  for (char c : s)
    out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.'
               ? c
               : '_';
  return out;
}

CexValue cex_value(const std::string &name, uint64_t bits, const Type &ty) {
  return {name, ty.to_string(), format_value(bits, ty), format_bits(bits, ty)};
}

Counterexample counterexample(const QueryScript &q, const SolverResult &r,
                              const Job &job, uint64_t budget) {
  Counterexample cx;
  std::map<NodeId, uint64_t> model;
  for (auto &v : q.free_vars) {
    auto it = r.model.find(v.name);
    if (it == r.model.end())
      continue;
    model[v.node] = it->second.bits;
    const Type &ty = job.ta.of(v.node);
    (v.role == VarRole::Fresh ? cx.choices : cx.inputs)
        .push_back(cex_value(v.name, it->second.bits, ty));
  }
  ReplayResult rr = replay(*job.t, job.ta, job.cca, model, budget);
  const Type &root_ty = job.ta.of(job.t->source_root());
  if (rr.source)
    cx.source = cex_value(job.t->root, *rr.source, root_ty);
  if (rr.target)
    cx.target = cex_value(job.t->root, *rr.target, root_ty);
  cx.replay = std::string(to_string(rr.status));
  cx.replay_note = rr.note;
  return cx;
}

void dump(const std::string &dir, const std::string &stem,
          const std::string &suffix, const std::string &text) {
  std::ofstream(std::filesystem::path(dir) / (stem + suffix)) << text;
}

InstanceResult solve_instance(const Job &job, const VerifyConfig &cfg,
                              std::optional<SolverStatus> *raw = nullptr) {
  InstanceResult out;
  out.types = named_types(*job.t, job.ta);
  for (auto &[name, cc] : job.cca)
    out.codes[name] = std::string(to_string(cc));

  QueryScript q;
  try {
    q = build_query(*job.t, job.ta, job.cca);
  } catch (const std::exception &e) {
    out.status = InstanceStatus::Error;
    out.error = e.what();
    return out;
  }
  out.quantified = q.quantified();
  if (!cfg.dump_dir.empty())
    dump(cfg.dump_dir, job.dump_stem, ".smt2", emit(q));

  SolverResult r = solve(q, cfg.solver);
  if (raw)
    *raw = r.status;
  if (!cfg.dump_dir.empty())
    dump(cfg.dump_dir, job.dump_stem, ".out", r.transcript);
  out.seconds = r.seconds;
  switch (r.status) {
  case SolverStatus::Unsat:
    out.status = InstanceStatus::Valid;
    break;
  case SolverStatus::Sat:
    out.status = InstanceStatus::Invalid;
    out.counterexample = counterexample(q, r, job, cfg.oracle_budget);
    break;
  case SolverStatus::Timeout:
    out.status = InstanceStatus::Timeout;
    break;
  case SolverStatus::Unknown:
    out.status = InstanceStatus::Unknown;
    break;
  case SolverStatus::Error:
    out.status = InstanceStatus::Error;
    out.error = r.error;
    break;
  }
  return out;
}

Outcome run(const Job &job, const VerifyConfig &cfg) {
  Outcome o;
  if (!job.cross) {
    o.instance = solve_instance(job, cfg);
    return o;
  }
  std::optional<SolverStatus> raw;
  o.instance = solve_instance(job, cfg, &raw);
  std::string label;
  for (auto &[name, ty] : o.instance.types)
    label += (label.empty() ? "" : " ") + name + ":" + ty;
  for (auto &[name, cc] : o.instance.codes)
    label += " " + name + "=" + cc;

  if (o.instance.status != InstanceStatus::Valid &&
      o.instance.status != InstanceStatus::Invalid) {
    o.skipped = label + ": solver " +
                std::string(to_string(raw.value_or(SolverStatus::Error)));
    return o;
  }
  try {
    auto bf = brute_force_verify(*job.t, job.ta, job.cca, cfg.oracle_budget);
    bool oracle_invalid = bf.verdict == OracleVerdict::Invalid;
    bool solver_invalid = o.instance.status == InstanceStatus::Invalid;
    if (oracle_invalid == solver_invalid)
      o.agreed = true;
    else
      o.disagreement = label + ": solver " +
                       (solver_invalid ? "invalid" : "valid") + ", oracle " +
                       (oracle_invalid ? "invalid" : "valid");
  } catch (const BudgetExceeded &e) {
    o.skipped = label + ": " + e.what();
  } catch (const std::exception &e) {
    o.disagreement = label + ": oracle failed: " + e.what();
  }
  return o;
}

struct Plan {
  std::vector<FileReport> files;
  std::vector<Job> jobs;
  std::vector<std::vector<Transform>> transforms; // kept alive for jobs
};

void plan_file(Plan &plan, const std::string &label, const std::string &text,
               const VerifyConfig &cfg) {
  size_t fi = plan.files.size();
  plan.files.push_back({label, "", {}});
  auto &store = plan.transforms[fi];
  auto blocks = parse_blocks(text);
  store.reserve(blocks.size());

  std::string stem = sanitize(std::filesystem::path(label).filename().string());
  for (auto &b : blocks) {
    TransformReport tr;
    tr.name = b.name;
    tr.line = b.first_line;
    size_t ti = plan.files[fi].transforms.size();
    if (b.error) {
      tr.status = TransformStatus::Error;
      tr.error = std::to_string(b.error->line()) + ":" +
                 std::to_string(b.error->column()) + ": " + b.error->message();
      plan.files[fi].transforms.push_back(std::move(tr));
      continue;
    }
    store.push_back(*b.transform);
    const Transform *t = &store.back();
    try {
      TypeConstraints c = gen_constraints(*t);
      auto codes = enumerate_cc(*t);
      auto add = [&](const WidthConfig &w, bool cross) {
        size_t n = 0;
        for (auto &ta : enumerate_assignments(c, w))
          for (auto &cca : codes) {
            Job j{fi, ti, t, ta, cca, cross,
                  stem + "-" + sanitize(t->name) + "-" +
                      (cross ? "x" : "") + std::to_string(n++)};
            plan.jobs.push_back(std::move(j));
          }
        return n;
      };
      if (add(cfg.widths, false) == 0) {
        tr.status = TransformStatus::Error;
        tr.error = "no type assignment fits the configured widths";
      }
      if (cfg.brute_force) {
        tr.cross_check = CrossCheck{};
        if (add(brute_force_widths(), true) == 0)
          tr.cross_check->skipped.push_back(
              "no type assignment at the oracle widths");
      }
    } catch (const std::exception &e) {
      tr.status = TransformStatus::Error;
      tr.error = e.what();
    }
    plan.files[fi].transforms.push_back(std::move(tr));
  }
}

Report execute(Plan &plan, const VerifyConfig &cfg) {
  std::vector<Outcome> outcomes(plan.jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < plan.jobs.size();)
      outcomes[i] = run(plan.jobs[i], cfg);
  };
  unsigned n = std::max(1u, std::min<unsigned>(cfg.jobs, plan.jobs.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i)
      pool.emplace_back(worker);
    for (auto &th : pool)
      th.join();
  }

  for (size_t i = 0; i < plan.jobs.size(); ++i) {
    const Job &j = plan.jobs[i];
    TransformReport &tr = plan.files[j.file].transforms[j.transform];
    Outcome &o = outcomes[i];
    if (!j.cross) {
      tr.instances.push_back(std::move(o.instance));
      continue;
    }
    CrossCheck &cc = *tr.cross_check;
    ++cc.instances;
    if (o.agreed)
      ++cc.agreed;
    if (!o.skipped.empty())
      cc.skipped.push_back(o.skipped);
    if (!o.disagreement.empty())
      cc.disagreements.push_back(o.disagreement);
  }

  Report r;
  r.config.timeout_s = cfg.solver.timeout_s;
  r.config.solver = cfg.solver.command;
  WidthConfig w = cfg.widths;
  w.normalize();
  for (auto &f : w.fp_formats)
    r.config.fp_formats.push_back(Type::fp(f).to_string());
  r.config.int_widths = w.int_widths;
  r.config.brute_force = cfg.brute_force;
  for (auto &f : plan.files) {
    for (auto &tr : f.transforms) {
      if (!tr.error.empty())
        continue;
      tr.status = summarize(tr.instances);
      if (tr.cross_check && !tr.cross_check->disagreements.empty() &&
          tr.status != TransformStatus::Incorrect) {
        tr.status = TransformStatus::Error;
        tr.error = "solver and oracle disagree";
      }
    }
    r.files.push_back(std::move(f));
  }
  return r;
}

std::optional<std::string> read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

Report verify_files(const std::vector<std::string> &paths,
                    const VerifyConfig &cfg) {
  if (!cfg.dump_dir.empty())
    std::filesystem::create_directories(cfg.dump_dir);
  Plan plan;
  plan.transforms.resize(paths.size());
  for (auto &p : paths) {
    auto text = read_file(p);
    if (!text) {
      plan.files.push_back({p, "cannot read file", {}});
      continue;
    }
    plan_file(plan, p, *text, cfg);
  }
  return execute(plan, cfg);
}

FileReport verify_file(const std::string &path, const VerifyConfig &cfg) {
  return verify_files({path}, cfg).files.at(0);
}

Report verify_text(const std::string &label, const std::string &text,
                   const VerifyConfig &cfg) {
  if (!cfg.dump_dir.empty())
    std::filesystem::create_directories(cfg.dump_dir);
  Plan plan;
  plan.transforms.resize(1);
  plan_file(plan, label, text, cfg);
  return execute(plan, cfg);
}

} // namespace fpv
