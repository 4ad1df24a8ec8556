#include <fstream>
#include <optional>
#include <sstream>

#include "electroar/analysis.hpp"
#include "electroar/error.hpp"
#include "text.hpp"

namespace electroar {

namespace {

std::string g6(double v) { return text::format_g(v, 6); }

std::string optional_g6(const std::optional<double>& v) { return v ? g6(*v) : std::string(); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

void emit_report(const ConfusionMatrix& matrix, const TrialTiming& timing, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + directory.string() + ": " + ec.message());

  const auto& labels = matrix.labels;
  std::ostringstream confusion;
  confusion << "true\\predicted";
  for (const auto& l : labels) confusion << ',' << l;
  confusion << '\n';
  for (std::size_t r = 0; r < labels.size(); ++r) {
    confusion << labels[r];
    for (auto c : matrix.counts[r]) confusion << ',' << c;
    confusion << '\n';
  }

  std::ostringstream accuracy;
  accuracy << "label,correct,total,accuracy,percent,top_confusion,confusion_percent\n";
  std::uint64_t correct_all = 0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const auto total = matrix.row_total(r);
    const auto correct = matrix.counts[r][r];
    correct_all += correct;
    const auto acc = matrix.accuracy(r);
    // Most frequent wrong answer; ties resolve to label order.
    std::optional<std::size_t> top;
    for (std::size_t c = 0; c < labels.size(); ++c) {
      if (c == r || matrix.counts[r][c] == 0) continue;
      if (!top || matrix.counts[r][c] > matrix.counts[r][*top]) top = c;
    }
    accuracy << labels[r] << ',' << correct << ',' << total << ',' << optional_g6(acc) << ','
             << (total ? g6(100.0 * static_cast<double>(correct) / static_cast<double>(total)) : std::string()) << ',';
    if (top) {
      accuracy << labels[*top] << ','
               << g6(100.0 * static_cast<double>(matrix.counts[r][*top]) / static_cast<double>(total));
    } else {
      accuracy << ',';
    }
    accuracy << '\n';
  }
  const auto all = matrix.total();
  accuracy << "overall," << correct_all << ',' << all << ',' << optional_g6(matrix.overall_accuracy()) << ','
           << (all ? g6(100.0 * static_cast<double>(correct_all) / static_cast<double>(all)) : std::string()) << ",,\n";

  std::ostringstream timing_csv;
  timing_csv << "label,count,q1,median,q3\n";
  for (const auto& t : timing.per_class)
    timing_csv << t.label << ',' << t.durations.size() << ',' << g6(t.q1) << ',' << g6(t.median) << ',' << g6(t.q3)
               << '\n';

  write_file(directory / "confusion.csv", confusion.str());
  write_file(directory / "accuracy.csv", accuracy.str());
  write_file(directory / "timing.csv", timing_csv.str());
}

std::vector<TrialRecord> read_trial_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<TrialRecord> trials;
  std::string line;
  bool header = false;
  std::size_t line_no = 0, columns = 0;
  std::optional<std::size_t> truth_col, predicted_col, duration_col;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = text::trim(line);
    if (view.empty()) continue;
    const auto fields = text::split(view, ',');
    if (!header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto name = text::trim(fields[i]);
        if (name == "true") truth_col = i;
        else if (name == "predicted") predicted_col = i;
        else if (name == "duration_s") duration_col = i;
      }
      if (!truth_col || !predicted_col)
        fail(ErrorCode::InvalidArgument, "trial log header needs `true` and `predicted` columns");
      columns = fields.size();
      header = true;
      continue;
    }
    if (fields.size() != columns || text::trim(fields[*truth_col]).empty() ||
        text::trim(fields[*predicted_col]).empty())
      fail(ErrorCode::InvalidArgument, "malformed trial row at line " + std::to_string(line_no));
    TrialRecord trial{std::string(text::trim(fields[*truth_col])), std::string(text::trim(fields[*predicted_col])),
                      std::nullopt};
    if (duration_col && !text::trim(fields[*duration_col]).empty()) {
      const auto d = text::parse_double(fields[*duration_col]);
      if (!d) fail(ErrorCode::InvalidArgument, "malformed duration at line " + std::to_string(line_no));
      trial.duration_s = *d;
    }
    trials.push_back(std::move(trial));
  }
  return trials;
}

}  // namespace electroar
