#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gvg {

inline constexpr std::string_view kTrainingLogMagic = "# gvg-training-log v1";
inline constexpr int kSmoothingWindow = 20;

struct TrainingRow {
    std::int64_t frames = 0;
    double episode_return = 0;
    std::int64_t episode_length = 0;
    double wall_time = 0;
    std::optional<int> worker;
};

struct TrainingLog {
    std::string algo;
    std::string game;
    std::string config_hash;
    std::vector<TrainingRow> rows;
};

/// Format in docs/training-log.md. Errors carry the offending line number.
TrainingLog parse_training_log(std::string_view text);
std::string format_training_log(const TrainingLog& log);

struct CurvePoint {
    std::int64_t frames = 0;
    double value = 0;
};

/// Trailing mean over the last `window` episodes (fewer at the start), one point per row.
std::vector<CurvePoint> smooth(const std::vector<TrainingRow>& rows, int window = kSmoothingWindow);

struct CurveSeries {
    std::string label;
    std::vector<CurvePoint> points;
};

std::string render_svg(const std::string& title, const std::vector<CurveSeries>& series);

/// Groups logs by game; writes <game>.svg and <game>.csv into `out_dir`. Returns the files written.
std::vector<std::filesystem::path> emit_curves(const std::vector<std::filesystem::path>& logs, const std::filesystem::path& out_dir,
                                               int window = kSmoothingWindow);

}  // namespace gvg
