#include "fpv/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace fpv {

using nlohmann::json;

std::string_view to_string(InstanceStatus s) {
  switch (s) {
  case InstanceStatus::Valid: return "valid";
  case InstanceStatus::Invalid: return "invalid";
  case InstanceStatus::Timeout: return "timeout";
  case InstanceStatus::Unknown: return "unknown";
  case InstanceStatus::Error: return "error";
  }
  return "?";
}

std::string_view to_string(TransformStatus s) {
  switch (s) {
  case TransformStatus::Correct: return "correct";
  case TransformStatus::Incorrect: return "incorrect";
  case TransformStatus::Unverified: return "unverified (timeout)";
  case TransformStatus::Unknown: return "unknown";
  case TransformStatus::Error: return "error";
  }
  return "?";
}

std::optional<InstanceStatus> parse_instance_status(std::string_view s) {
  for (auto st : {InstanceStatus::Valid, InstanceStatus::Invalid,
                  InstanceStatus::Timeout, InstanceStatus::Unknown,
                  InstanceStatus::Error})
    if (to_string(st) == s)
      return st;
  return std::nullopt;
}

std::optional<TransformStatus> parse_transform_status(std::string_view s) {
  for (auto st : {TransformStatus::Correct, TransformStatus::Incorrect,
                  TransformStatus::Unverified, TransformStatus::Unknown,
                  TransformStatus::Error})
    if (to_string(st) == s)
      return st;
  return std::nullopt;
}

Counts &Counts::operator+=(const Counts &o) {
  correct += o.correct;
  incorrect += o.incorrect;
  unverified += o.unverified;
  unknown += o.unknown;
  errors += o.errors;
  valid += o.valid;
  invalid += o.invalid;
  timeout += o.timeout;
  unknown_instances += o.unknown_instances;
  error_instances += o.error_instances;
  return *this;
}

Counts count(const FileReport &f) {
  Counts c;
  if (!f.error.empty())
    ++c.errors;
  for (auto &t : f.transforms) {
    switch (t.status) {
    case TransformStatus::Correct: ++c.correct; break;
    case TransformStatus::Incorrect: ++c.incorrect; break;
    case TransformStatus::Unverified: ++c.unverified; break;
    case TransformStatus::Unknown: ++c.unknown; break;
    case TransformStatus::Error: ++c.errors; break;
    }
    for (auto &i : t.instances) {
      switch (i.status) {
      case InstanceStatus::Valid: ++c.valid; break;
      case InstanceStatus::Invalid: ++c.invalid; break;
      case InstanceStatus::Timeout: ++c.timeout; break;
      case InstanceStatus::Unknown: ++c.unknown_instances; break;
      case InstanceStatus::Error: ++c.error_instances; break;
      }
    }
  }
  return c;
}

Counts count(const Report &r) {
  Counts c;
  for (auto &f : r.files)
    c += count(f);
  return c;
}

TransformStatus summarize(const std::vector<InstanceResult> &instances) {
  auto any = [&](InstanceStatus s) {
    return std::any_of(instances.begin(), instances.end(),
                       [&](const InstanceResult &i) { return i.status == s; });
  };
  if (any(InstanceStatus::Invalid))
    return TransformStatus::Incorrect;
  if (instances.empty() || any(InstanceStatus::Error))
    return TransformStatus::Error;
  if (any(InstanceStatus::Timeout))
    return TransformStatus::Unverified;
  if (any(InstanceStatus::Unknown))
    return TransformStatus::Unknown;
  return TransformStatus::Correct;
}

int exit_code(const Report &r) {
  bool errors = false;
  for (auto &f : r.files) {
    errors |= !f.error.empty();
    for (auto &t : f.transforms) {
      if (t.status == TransformStatus::Incorrect)
        return 1;
      errors |= t.status == TransformStatus::Error;
      errors |= t.cross_check && !t.cross_check->disagreements.empty();
      for (auto &i : t.instances)
        errors |= i.status == InstanceStatus::Error;
    }
  }
  if (errors)
    return 3;
  Counts c = count(r);
  return c.unverified + c.unknown > 0 ? 2 : 0;
}

// ---------------------------------------------------------------------------
// Text

namespace {

std::string pad(const std::string &s, size_t w, bool right) {
  if (s.size() >= w)
    return s;
  return right ? std::string(w - s.size(), ' ') + s
               : s + std::string(w - s.size(), ' ');
}

std::string line_of(const CexValue &v) {
  return v.name + " = " + v.value + "  [" + v.bits + "]  (" + v.type + ")";
}

std::string instance_header(const InstanceResult &i) {
  std::string s;
  for (auto &[name, ty] : i.types)
    s += (s.empty() ? "" : " ") + name + ":" + ty;
  for (auto &[name, cc] : i.codes)
    s += " " + name + "=" + cc;
  return s;
}

} // namespace

static std::string render_text(const Report &r) {
  std::vector<std::vector<std::string>> rows;
  for (auto &f : r.files) {
    Counts c = count(f);
    rows.push_back({f.path, std::to_string(c.correct),
                    std::to_string(c.unverified + c.unknown),
                    std::to_string(c.incorrect), std::to_string(c.errors),
                    std::to_string(c.transforms())});
  }
  Counts t = count(r);
  std::vector<std::string> header{"File", "Verified", "Timeouts", "Bugs",
                                  "Errors", "Total"};
  std::vector<std::string> total{"Total", std::to_string(t.correct),
                                 std::to_string(t.unverified + t.unknown),
                                 std::to_string(t.incorrect),
                                 std::to_string(t.errors),
                                 std::to_string(t.transforms())};
  std::vector<size_t> width(header.size());
  for (auto *row : {&header, &total})
    for (size_t i = 0; i < row->size(); ++i)
      width[i] = std::max(width[i], (*row)[i].size());
  for (auto &row : rows)
    for (size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], row[i].size());

  auto emit_row = [&](const std::vector<std::string> &row) {
    std::string s;
    for (size_t i = 0; i < row.size(); ++i)
      s += (i ? "  " : "") + pad(row[i], width[i], i > 0);
    return s + "\n";
  };
  std::string out = emit_row(header);
  size_t rule = 0;
  for (auto w : width)
    rule += w + 2;
  out += std::string(rule - 2, '-') + "\n";
  for (auto &row : rows)
    out += emit_row(row);
  out += std::string(rule - 2, '-') + "\n";
  out += emit_row(total);

  for (auto &f : r.files) {
    if (!f.error.empty())
      out += "\n" + f.path + ": error: " + f.error + "\n";
    for (auto &tr : f.transforms) {
      std::string where = f.path + ":" + std::to_string(tr.line);
      out += "\n" + tr.name + " (" + where + "): " +
             std::string(to_string(tr.status)) + "\n";
      if (!tr.error.empty())
        out += "  error: " + tr.error + "\n";
      unsigned shown_invalid = 0;
      for (auto &i : tr.instances) {
        if (i.status == InstanceStatus::Valid)
          continue;
        if (i.status == InstanceStatus::Invalid && shown_invalid++ > 0)
          continue;
        out += "  [" + std::string(to_string(i.status)) + "] " +
               instance_header(i) + (i.quantified ? "  (quantified)" : "") +
               "\n";
        if (!i.error.empty())
          out += "    " + i.error + "\n";
        if (auto &cx = i.counterexample) {
          for (auto &v : cx->inputs)
            out += "    " + line_of(v) + "\n";
          for (auto &v : cx->choices)
            out += "    target choice " + line_of(v) + "\n";
          if (cx->source)
            out += "    source " + line_of(*cx->source) + "\n";
          else
            out += "    source depends on undef\n";
          if (cx->target)
            out += "    target " + line_of(*cx->target) + "\n";
          out += "    replay: " + cx->replay +
                 (cx->replay_note.empty() ? "" : " (" + cx->replay_note + ")") +
                 "\n";
        }
      }
      if (shown_invalid > 1)
        out += "  ... " + std::to_string(shown_invalid - 1) +
               " more invalid instance(s)\n";
      size_t valid = std::count_if(
          tr.instances.begin(), tr.instances.end(),
          [](auto &i) { return i.status == InstanceStatus::Valid; });
      out += "  " + std::to_string(valid) + "/" +
             std::to_string(tr.instances.size()) + " instance(s) valid\n";
      if (auto &cc = tr.cross_check) {
        out += "  oracle cross-check: " + std::to_string(cc->agreed) + "/" +
               std::to_string(cc->instances) + " agree";
        if (!cc->skipped.empty())
          out += ", " + std::to_string(cc->skipped.size()) + " skipped";
        out += "\n";
        for (auto &d : cc->disagreements)
          out += "    DISAGREEMENT " + d + "\n";
        for (auto &s : cc->skipped)
          out += "    skipped " + s + "\n";
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json to_json(const CexValue &v) {
  return {{"name", v.name}, {"type", v.type}, {"value", v.value},
          {"bits", v.bits}};
}

CexValue cex_value(const json &j) {
  return {j.at("name").get<std::string>(), j.at("type").get<std::string>(),
          j.at("value").get<std::string>(), j.at("bits").get<std::string>()};
}

json to_json(const Counts &c) {
  return {{"verified", c.correct},
          {"bugs", c.incorrect},
          {"timeouts", c.unverified},
          {"unknown", c.unknown},
          {"errors", c.errors},
          {"transforms", c.transforms()},
          {"instances",
           {{"valid", c.valid},
            {"invalid", c.invalid},
            {"timeout", c.timeout},
            {"unknown", c.unknown_instances},
            {"error", c.error_instances}}}};
}

json to_json(const InstanceResult &i) {
  json types = json::array();
  for (auto &[name, ty] : i.types)
    types.push_back({{"name", name}, {"type", ty}});
  json j = {{"types", types},
            {"codes", i.codes},
            {"status", to_string(i.status)},
            {"seconds", i.seconds},
            {"quantified", i.quantified},
            {"error", i.error},
            {"counterexample", nullptr}};
  if (auto &cx = i.counterexample) {
    json inputs = json::array(), choices = json::array();
    for (auto &v : cx->inputs)
      inputs.push_back(to_json(v));
    for (auto &v : cx->choices)
      choices.push_back(to_json(v));
    j["counterexample"] = {
        {"inputs", inputs},
        {"choices", choices},
        {"source", cx->source ? to_json(*cx->source) : json(nullptr)},
        {"target", cx->target ? to_json(*cx->target) : json(nullptr)},
        {"replay", cx->replay},
        {"replay_note", cx->replay_note}};
  }
  return j;
}

InstanceResult instance(const json &j) {
  InstanceResult i;
  for (auto &t : j.at("types"))
    i.types.emplace_back(t.at("name").get<std::string>(),
                         t.at("type").get<std::string>());
  i.codes = j.at("codes").get<std::map<std::string, std::string>>();
  auto st = parse_instance_status(j.at("status").get<std::string>());
  if (!st)
    throw std::runtime_error("bad instance status " + j.at("status").dump());
  i.status = *st;
  i.seconds = j.at("seconds").get<double>();
  i.quantified = j.at("quantified").get<bool>();
  i.error = j.at("error").get<std::string>();
  const json &c = j.at("counterexample");
  if (!c.is_null()) {
    Counterexample cx;
    for (auto &v : c.at("inputs"))
      cx.inputs.push_back(cex_value(v));
    for (auto &v : c.at("choices"))
      cx.choices.push_back(cex_value(v));
    if (!c.at("source").is_null())
      cx.source = cex_value(c.at("source"));
    if (!c.at("target").is_null())
      cx.target = cex_value(c.at("target"));
    cx.replay = c.at("replay").get<std::string>();
    cx.replay_note = c.at("replay_note").get<std::string>();
    i.counterexample = std::move(cx);
  }
  return i;
}

} // namespace

static std::string render_json(const Report &r) {
  json files = json::array();
  for (auto &f : r.files) {
    json transforms = json::array();
    for (auto &t : f.transforms) {
      json instances = json::array();
      for (auto &i : t.instances)
        instances.push_back(to_json(i));
      json cc = nullptr;
      if (t.cross_check)
        cc = {{"instances", t.cross_check->instances},
              {"agreed", t.cross_check->agreed},
              {"skipped", t.cross_check->skipped},
              {"disagreements", t.cross_check->disagreements}};
      transforms.push_back({{"name", t.name},
                            {"line", t.line},
                            {"status", to_string(t.status)},
                            {"error", t.error},
                            {"instances", instances},
                            {"cross_check", cc}});
    }
    files.push_back({{"path", f.path},
                     {"error", f.error},
                     {"transforms", transforms},
                     {"counts", to_json(count(f))}});
  }
  json j = {{"schema_version", r.schema_version},
            {"tool", {{"name", r.tool}, {"version", r.version}}},
            {"config",
             {{"timeout_s", r.config.timeout_s},
              {"solver", r.config.solver},
              {"fp_formats", r.config.fp_formats},
              {"int_widths", r.config.int_widths},
              {"brute_force", r.config.brute_force}}},
            {"files", files},
            {"totals", to_json(count(r))},
            {"exit_code", exit_code(r)}};
  return j.dump(2) + "\n";
}

std::string render(const Report &r, ReportFormat format) {
  return format == ReportFormat::Json ? render_json(r) : render_text(r);
}

Report parse_report_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
  try {
    Report r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != 1)
      throw std::runtime_error("unsupported report schema version " +
                               std::to_string(r.schema_version));
    r.tool = j.at("tool").at("name").get<std::string>();
    r.version = j.at("tool").at("version").get<std::string>();
    const json &c = j.at("config");
    r.config.timeout_s = c.at("timeout_s").get<double>();
    r.config.solver = c.at("solver").get<std::string>();
    r.config.fp_formats = c.at("fp_formats").get<std::vector<std::string>>();
    r.config.int_widths = c.at("int_widths").get<std::vector<unsigned>>();
    r.config.brute_force = c.at("brute_force").get<bool>();
    for (auto &fj : j.at("files")) {
      FileReport f;
      f.path = fj.at("path").get<std::string>();
      f.error = fj.at("error").get<std::string>();
      for (auto &tj : fj.at("transforms")) {
        TransformReport t;
        t.name = tj.at("name").get<std::string>();
        t.line = tj.at("line").get<int>();
        auto st = parse_transform_status(tj.at("status").get<std::string>());
        if (!st)
          throw std::runtime_error("bad transform status " +
                                   tj.at("status").dump());
        t.status = *st;
        t.error = tj.at("error").get<std::string>();
        for (auto &ij : tj.at("instances"))
          t.instances.push_back(instance(ij));
        const json &cc = tj.at("cross_check");
        if (!cc.is_null()) {
          CrossCheck x;
          x.instances = cc.at("instances").get<unsigned>();
          x.agreed = cc.at("agreed").get<unsigned>();
          x.skipped = cc.at("skipped").get<std::vector<std::string>>();
          x.disagreements =
              cc.at("disagreements").get<std::vector<std::string>>();
          t.cross_check = std::move(x);
        }
        f.transforms.push_back(std::move(t));
      }
      r.files.push_back(std::move(f));
    }
    return r;
  } catch (const json::exception &e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
}

} // namespace fpv
