#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lsa::cli {

struct LdaFlags {
  int topics = 10;
  double alpha = -1;
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 42;
  double threshold = 0.05;
};

struct RunFlags {
  std::filesystem::path registry = "fixtures/models.json";
  std::filesystem::path scenario_dir = "fixtures/scenarios";
  std::string model;
  std::string scenario;
  std::string language;
  std::string backend;
  std::filesystem::path fixture;
  std::filesystem::path store = "lsa-store";
  std::string resume;
  bool headless = false;
};

struct BatchFlags {
  std::filesystem::path registry = "fixtures/models.json";
  std::filesystem::path scenario_dir = "fixtures/scenarios";
  std::vector<std::string> scenarios;
  std::vector<std::string> models;
  std::filesystem::path out;
  std::string backend;
  int jobs = 1;
  LdaFlags lda;
};

struct AnalyzeFlags {
  std::filesystem::path transcript;
  std::string language;
  std::filesystem::path out;
  LdaFlags lda;
};

struct ScoreFlags {
  std::string action;
  std::filesystem::path db = "scores.csv";
  std::filesystem::path csv;
  std::filesystem::path registry;
  bool overwrite = false;
  std::string model;
  std::string scenario;
  std::string criterion;
  std::string rater;
  int value = 0;
  std::string note;
};

struct ReportFlags {
  std::filesystem::path registry = "fixtures/models.json";
  std::filesystem::path scenario_dir = "fixtures/scenarios";
  std::vector<std::filesystem::path> sessions;
  std::filesystem::path scores;
  std::string format = "md";
  std::filesystem::path out = "report";
};

struct ServeFlags {
  std::filesystem::path registry = "fixtures/models.json";
  std::string addr = "127.0.0.1:8080";
  std::filesystem::path store = "lsa-store";
  std::filesystem::path reports = "reports";
};

struct RecordFlags {
  std::filesystem::path registry = "fixtures/models.json";
  std::filesystem::path scenario_dir = "fixtures/scenarios";
  std::string model;
  std::string scenario;
  std::filesystem::path replies;
  std::filesystem::path out;
};

int run_command(const RunFlags& flags);
int batch_command(const BatchFlags& flags);
int analyze_command(const AnalyzeFlags& flags);
int score_command(const ScoreFlags& flags);
int report_command(const ReportFlags& flags);
int serve_command(const ServeFlags& flags);
int record_command(const RecordFlags& flags);

}  // namespace lsa::cli
