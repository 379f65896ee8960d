/*
 * Copyright 2026 The hsvmlru Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hsvmlru/labeling.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

#include "hsvmlru/csv.hpp"
#include "hsvmlru/error.hpp"
#include "hsvmlru/rng.hpp"

namespace hsvmlru {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(JobStatus s) {
  switch (s) {
    case JobStatus::New: return "new";
    case JobStatus::Initiated: return "initiated";
    case JobStatus::Running: return "running";
    case JobStatus::Succeeded: return "succeeded";
    case JobStatus::Failed: return "failed";
    case JobStatus::Killed: return "killed";
    case JobStatus::Error: return "error";
  }
  return "?";
}

std::string_view to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::New: return "new";
    case TaskStatus::Scheduled: return "scheduled";
    case TaskStatus::Running: return "running";
    case TaskStatus::Succeeded: return "succeeded";
    case TaskStatus::Failed: return "failed";
    case TaskStatus::Killed: return "killed";
    case TaskStatus::Waiting: return "waiting";
  }
  return "?";
}

std::string_view to_string(Target t) { return t == Target::MapInput ? "map_input" : "reduce_input"; }

std::optional<JobStatus> parse_job_status(std::string_view s) {
  for (auto v : kJobStatuses) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<TaskStatus> parse_task_status(std::string_view s) {
  for (auto v : kTaskStatuses) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Target> parse_target(std::string_view s) {
  if (s == "map_input") return Target::MapInput;
  if (s == "reduce_input") return Target::ReduceInput;
  return std::nullopt;
}

const std::vector<GuidelineRow>& guideline_rows() {
  using J = JobStatus;
  using T = TaskStatus;
  constexpr auto R = Label::Reused;
  constexpr auto N = Label::NotReused;
  static const std::vector<GuidelineRow> rows = {
      {J::New, T::New, T::New, N, N},
      {J::Initiated, T::Scheduled, T::Waiting, R, N},
      {J::Running, T::Running, T::Waiting, R, N},
      {J::Running, T::Succeeded, T::Scheduled, N, R},
      {J::Running, T::Succeeded, T::Running, N, R},
      {J::Running, T::Failed, T::Waiting, N, N},
      {J::Running, T::Succeeded, T::Failed, N, N},
      {J::Running, T::Killed, T::Waiting, R, N},  // speculative map re-execution
      {J::Running, T::Succeeded, T::Killed, N, R},
      {J::Succeeded, T::Succeeded, T::Succeeded, N, N},
      {J::Failed, T::New, T::New, N, N},
  };
  return rows;
}

LabelDecision label_request(JobStatus job, TaskStatus map, TaskStatus reduce, Target target) {
  if (job == JobStatus::Failed || job == JobStatus::Killed || job == JobStatus::Error) {
    return {Label::NotReused, false};
  }
  for (const auto& row : guideline_rows()) {
    if (row.job == job && row.map == map && row.reduce == reduce) {
      return {target == Target::MapInput ? row.map_input : row.reduce_input, false};
    }
  }
  return {Label::NotReused, true};
}

namespace {

std::int64_t completed_for(TaskStatus s, std::int64_t total, Rng& rng) {
  switch (s) {
    case TaskStatus::Succeeded: return total;
    case TaskStatus::Running:
    case TaskStatus::Failed:
    case TaskStatus::Killed: return rng.between(0, total - 1);
    default: return 0;
  }
}

double progress_for(TaskStatus s, Rng& rng) {
  switch (s) {
    case TaskStatus::Succeeded: return 100.0;
    case TaskStatus::New:
    case TaskStatus::Scheduled:
    case TaskStatus::Waiting: return 0.0;
    default: return static_cast<double>(rng.between(1, 99));
  }
}

TaskStatus any_task_status(Rng& rng) { return kTaskStatuses[rng.below(kTaskStatuses.size())]; }

}  // namespace

JobHistory synthesize_history(const WorkloadSpec& spec, std::uint64_t seed, HistoryOptions opts) {
  JobHistory h;
  Rng rng(seed);
  const auto& rows = guideline_rows();
  std::int64_t clock = 0;
  std::size_t job_no = 0;
  for (std::size_t round = 0; round < opts.jobs_per_app; ++round) {
    for (const auto& app : spec.apps) {
      JobStatus js;
      TaskStatus ms;
      TaskStatus rs;
      if (job_no < rows.size() || rng.uniform() < 0.8) {
        const auto& row = rows[job_no < rows.size() ? job_no : rng.below(rows.size())];
        js = row.job;
        ms = row.map;
        rs = row.reduce;
        if (js == JobStatus::Failed) {
          ms = any_task_status(rng);
          rs = any_task_status(rng);
        }
      } else {
        // Off-table combinations: terminated jobs and unlisted triples.
        js = kJobStatuses[rng.below(kJobStatuses.size())];
        ms = any_task_status(rng);
        rs = any_task_status(rng);
      }

      JobRecord job;
      char id[32];
      std::snprintf(id, sizeof id, "job_%05zu", job_no);
      job.job_id = id;
      job.job_name = app.name;
      job.cache_affinity = app.affinity;
      job.job_status = js;
      job.maps_total = rng.between(1, 64);
      job.reduces_total = rng.between(1, 16);
      job.maps_completed = completed_for(ms, job.maps_total, rng);
      job.reduces_completed = completed_for(rs, job.reduces_total, rng);
      clock += rng.between(1000, 60000);
      job.start_time_ms = clock;
      const bool finished =
          js == JobStatus::Succeeded || js == JobStatus::Failed || js == JobStatus::Killed;
      job.finish_time_ms = finished ? clock + rng.between(10000, 600000) : clock;

      const std::int64_t avg_map = job.maps_completed > 0 ? rng.between(5000, 120000) : 0;
      const std::int64_t avg_reduce = job.reduces_completed > 0 ? rng.between(5000, 240000) : 0;
      const auto n_map = rng.between(1, 3);
      const auto n_reduce = rng.between(1, 2);
      auto add_task = [&](TaskType type, TaskStatus status) {
        TaskRecord t;
        t.job_id = job.job_id;
        t.task_type = type;
        t.task_status = status;
        t.avg_map_time_ms = avg_map;
        t.avg_reduce_time_ms = avg_reduce;
        t.progress_pct = progress_for(status, rng);
        h.tasks.push_back(t);
      };
      for (std::int64_t i = 0; i < n_map; ++i) add_task(TaskType::Map, ms);
      for (std::int64_t i = 0; i < n_reduce; ++i) add_task(TaskType::Reduce, rs);
      h.jobs.push_back(std::move(job));
      ++job_no;
    }
  }
  return h;
}

std::vector<LabeledRow> label_history(const JobHistory& history) {
  struct Phases {
    const JobRecord* job;
    std::optional<TaskStatus> map, reduce;
  };
  std::unordered_map<std::string, Phases> by_id;
  for (const auto& j : history.jobs) by_id[j.job_id] = {&j, std::nullopt, std::nullopt};
  for (const auto& t : history.tasks) {
    auto it = by_id.find(t.job_id);
    if (it == by_id.end()) throw DataError("task references unknown job " + t.job_id);
    auto& slot = t.task_type == TaskType::Map ? it->second.map : it->second.reduce;
    if (!slot) slot = t.task_status;
  }
  std::vector<LabeledRow> out;
  out.reserve(history.tasks.size() * 2);
  for (const auto& t : history.tasks) {
    const auto& ph = by_id.at(t.job_id);
    for (auto target : {Target::MapInput, Target::ReduceInput}) {
      LabeledRow r;
      r.row = {*ph.job, t, target};
      r.map_phase = ph.map.value_or(TaskStatus::New);
      r.reduce_phase = ph.reduce.value_or(TaskStatus::New);
      const auto d = label_request(ph.job->job_status, r.map_phase, r.reduce_phase, target);
      r.label = d.label;
      r.defaulted = d.defaulted;
      out.push_back(std::move(r));
    }
  }
  return out;
}

void write_history(const JobHistory& h, std::ostream& out) {
  std::unordered_map<std::string, std::vector<const TaskRecord*>> tasks;
  for (const auto& t : h.tasks) tasks[t.job_id].push_back(&t);
  for (const auto& j : h.jobs) {
    ordered_json o;
    o["job_id"] = j.job_id;
    o["job_name"] = j.job_name;
    o["maps_total"] = j.maps_total;
    o["maps_completed"] = j.maps_completed;
    o["reduces_total"] = j.reduces_total;
    o["reduces_completed"] = j.reduces_completed;
    o["job_status"] = to_string(j.job_status);
    o["cache_affinity"] = to_string(j.cache_affinity);
    o["start_time"] = j.start_time_ms;
    o["finish_time"] = j.finish_time_ms;
    auto arr = ordered_json::array();
    for (const auto* t : tasks[j.job_id]) {
      ordered_json tj;
      tj["task_type"] = to_string(t->task_type);
      tj["task_status"] = to_string(t->task_status);
      tj["avg_map_time"] = t->avg_map_time_ms;
      tj["avg_reduce_time"] = t->avg_reduce_time_ms;
      tj["progress"] = t->progress_pct;
      arr.push_back(std::move(tj));
    }
    o["tasks"] = std::move(arr);
    out << o.dump() << '\n';
  }
}

namespace {

template <typename T, typename Parse>
T enum_field(const json& j, const char* key, Parse parse, std::size_t line) {
  auto v = parse(j.at(key).get<std::string>());
  if (!v) throw DataError("line " + std::to_string(line) + ": bad value for " + key);
  return *v;
}

}  // namespace

JobHistory parse_history(std::istream& in) {
  JobHistory h;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    try {
      const auto o = json::parse(text);
      JobRecord j;
      j.job_id = o.at("job_id").get<std::string>();
      j.job_name = o.at("job_name").get<std::string>();
      j.maps_total = o.at("maps_total").get<std::int64_t>();
      j.maps_completed = o.at("maps_completed").get<std::int64_t>();
      j.reduces_total = o.at("reduces_total").get<std::int64_t>();
      j.reduces_completed = o.at("reduces_completed").get<std::int64_t>();
      j.job_status = enum_field<JobStatus>(o, "job_status", parse_job_status, line);
      j.cache_affinity = enum_field<Affinity>(o, "cache_affinity", parse_affinity, line);
      j.start_time_ms = o.at("start_time").get<std::int64_t>();
      j.finish_time_ms = o.at("finish_time").get<std::int64_t>();
      if (j.maps_completed > j.maps_total || j.reduces_completed > j.reduces_total) {
        throw DataError("line " + std::to_string(line) + ": completed count exceeds total");
      }
      for (const auto& tj : o.at("tasks")) {
        TaskRecord t;
        t.job_id = j.job_id;
        t.task_type = enum_field<TaskType>(tj, "task_type", parse_task_type, line);
        t.task_status = enum_field<TaskStatus>(tj, "task_status", parse_task_status, line);
        t.avg_map_time_ms = tj.at("avg_map_time").get<std::int64_t>();
        t.avg_reduce_time_ms = tj.at("avg_reduce_time").get<std::int64_t>();
        t.progress_pct = tj.at("progress").get<double>();
        h.tasks.push_back(t);
      }
      h.jobs.push_back(std::move(j));
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(line) + ": " + e.what());
    }
  }
  return h;
}

JobHistory load_history(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read " + file.string());
  return parse_history(in);
}

const std::string& labeled_csv_header() {
  static const std::string h =
      "job_id,job_name,maps_total,maps_completed,reduces_total,reduces_completed,job_status,"
      "cache_affinity,start_time,finish_time,map_phase_status,reduce_phase_status,task_type,"
      "task_status,avg_map_time,avg_reduce_time,progress,target,label";
  return h;
}

void write_labeled_csv(const std::vector<LabeledRow>& rows, std::ostream& out) {
  out << labeled_csv_header() << '\n';
  for (const auto& r : rows) {
    const auto& j = r.row.job;
    const auto& t = r.row.task;
    out << csv::join({j.job_id, j.job_name, std::to_string(j.maps_total), std::to_string(j.maps_completed),
                      std::to_string(j.reduces_total), std::to_string(j.reduces_completed),
                      std::string(to_string(j.job_status)), std::string(to_string(j.cache_affinity)),
                      std::to_string(j.start_time_ms), std::to_string(j.finish_time_ms),
                      std::string(to_string(r.map_phase)), std::string(to_string(r.reduce_phase)),
                      std::string(to_string(t.task_type)), std::string(to_string(t.task_status)),
                      std::to_string(t.avg_map_time_ms), std::to_string(t.avg_reduce_time_ms),
                      csv::format(t.progress_pct), std::string(to_string(r.row.target)),
                      std::to_string(to_int(r.label))})
        << '\n';
  }
}

std::vector<LabeledRow> parse_labeled_csv(std::istream& in) {
  std::string text;
  if (!std::getline(in, text) || text != labeled_csv_header()) {
    throw DataError("labeled csv: unexpected header");
  }
  std::vector<LabeledRow> rows;
  std::size_t line = 1;
  auto bad = [&](const char* what) {
    throw DataError("line " + std::to_string(line) + ": " + what);
  };
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const auto f = csv::split(text);
    if (f.size() != 19) bad("expected 19 fields");
    auto num = [&](std::size_t i) {
      auto v = csv::to_int(f[i]);
      if (!v) bad("bad integer");
      return static_cast<std::int64_t>(*v);
    };
    LabeledRow r;
    auto& j = r.row.job;
    auto& t = r.row.task;
    j.job_id = f[0];
    j.job_name = f[1];
    j.maps_total = num(2);
    j.maps_completed = num(3);
    j.reduces_total = num(4);
    j.reduces_completed = num(5);
    auto js = parse_job_status(f[6]);
    auto aff = parse_affinity(f[7]);
    auto mp = parse_task_status(f[10]);
    auto rp = parse_task_status(f[11]);
    auto tt = parse_task_type(f[12]);
    auto ts = parse_task_status(f[13]);
    auto tg = parse_target(f[17]);
    auto prog = csv::to_double(f[16]);
    if (!js || !aff || !mp || !rp || !tt || !ts || !tg || !prog) bad("bad field value");
    if (f[18] != "0" && f[18] != "1") bad("label must be 0 or 1");
    j.job_status = *js;
    j.cache_affinity = *aff;
    j.start_time_ms = num(8);
    j.finish_time_ms = num(9);
    t.job_id = j.job_id;
    t.task_type = *tt;
    t.task_status = *ts;
    t.avg_map_time_ms = num(14);
    t.avg_reduce_time_ms = num(15);
    t.progress_pct = *prog;
    r.row.target = *tg;
    r.map_phase = *mp;
    r.reduce_phase = *rp;
    r.label = f[18] == "1" ? Label::Reused : Label::NotReused;
    r.defaulted = label_request(j.job_status, r.map_phase, r.reduce_phase, r.row.target).defaulted;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace hsvmlru
