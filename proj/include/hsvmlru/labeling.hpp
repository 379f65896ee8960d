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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsvmlru/types.hpp"
#include "hsvmlru/workload.hpp"

namespace hsvmlru {

enum class JobStatus { New, Initiated, Running, Succeeded, Failed, Killed, Error };
enum class TaskStatus { New, Scheduled, Running, Succeeded, Failed, Killed, Waiting };
// Which task's input a label refers to.
enum class Target { MapInput, ReduceInput };

inline constexpr std::array kJobStatuses = {JobStatus::New,       JobStatus::Initiated, JobStatus::Running,
                                            JobStatus::Succeeded, JobStatus::Failed,    JobStatus::Killed,
                                            JobStatus::Error};
inline constexpr std::array kTaskStatuses = {TaskStatus::New,       TaskStatus::Scheduled, TaskStatus::Running,
                                             TaskStatus::Succeeded, TaskStatus::Failed,    TaskStatus::Killed,
                                             TaskStatus::Waiting};

std::string_view to_string(JobStatus s);
std::string_view to_string(TaskStatus s);
std::string_view to_string(Target t);
std::optional<JobStatus> parse_job_status(std::string_view s);
std::optional<TaskStatus> parse_task_status(std::string_view s);
std::optional<Target> parse_target(std::string_view s);

struct JobRecord {
  std::string job_id;
  std::string job_name;
  std::int64_t maps_total = 0;
  std::int64_t maps_completed = 0;
  std::int64_t reduces_total = 0;
  std::int64_t reduces_completed = 0;
  JobStatus job_status = JobStatus::New;
  Affinity cache_affinity = Affinity::Medium;
  std::int64_t start_time_ms = 0;
  std::int64_t finish_time_ms = 0;  // equals start_time_ms while unfinished

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

struct TaskRecord {
  std::string job_id;
  TaskType task_type = TaskType::Map;
  TaskStatus task_status = TaskStatus::New;
  std::int64_t avg_map_time_ms = 0;
  std::int64_t avg_reduce_time_ms = 0;
  double progress_pct = 0.0;

  friend bool operator==(const TaskRecord&, const TaskRecord&) = default;
};

struct JobHistory {
  std::vector<JobRecord> jobs;
  std::vector<TaskRecord> tasks;

  friend bool operator==(const JobHistory&, const JobHistory&) = default;
};

struct LabelDecision {
  Label label = Label::NotReused;
  // True when the status triple matches no guideline row.
  bool defaulted = false;
};

// Status-based labeling guideline. Failed, Killed and Error jobs label both
// targets NotReused regardless of task status.
LabelDecision label_request(JobStatus job, TaskStatus map, TaskStatus reduce, Target target);

struct GuidelineRow {
  JobStatus job;
  TaskStatus map;
  TaskStatus reduce;
  Label map_input;
  Label reduce_input;
};

// The explicit guideline rows. The Failed row is stored with New/New task
// statuses; its task statuses are irrelevant.
const std::vector<GuidelineRow>& guideline_rows();

struct HistoryRow {
  JobRecord job;
  TaskRecord task;
  Target target = Target::MapInput;
};

struct LabeledRow {
  HistoryRow row;
  TaskStatus map_phase = TaskStatus::New;
  TaskStatus reduce_phase = TaskStatus::New;
  Label label = Label::NotReused;
  bool defaulted = false;

  friend bool operator==(const LabeledRow& a, const LabeledRow& b) {
    return a.row.job == b.row.job && a.row.task == b.row.task && a.row.target == b.row.target &&
           a.map_phase == b.map_phase && a.reduce_phase == b.reduce_phase && a.label == b.label &&
           a.defaulted == b.defaulted;
  }
};

struct HistoryOptions {
  std::size_t jobs_per_app = 50;
};

// Synthetic job history. The first jobs cycle through every guideline row so
// any history of at least guideline_rows().size() jobs covers all of them.
JobHistory synthesize_history(const WorkloadSpec& spec, std::uint64_t seed, HistoryOptions opts = {});

// One row per (task, target). Phase status = status of the job's first task of
// that type (New when the job has none).
std::vector<LabeledRow> label_history(const JobHistory& history);

void write_history(const JobHistory& h, std::ostream& out);
JobHistory parse_history(std::istream& in);
JobHistory load_history(const std::filesystem::path& file);

void write_labeled_csv(const std::vector<LabeledRow>& rows, std::ostream& out);
std::vector<LabeledRow> parse_labeled_csv(std::istream& in);
const std::string& labeled_csv_header();

}  // namespace hsvmlru
