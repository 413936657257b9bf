#include "gvg/curves.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gvg/common.hpp"
#include "gvg/games.hpp"

namespace gvg {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto p = s.find(sep, start);
        out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) return out;
        start = p + 1;
    }
}

template <typename T>
bool parse_num(std::string_view s, T& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || p != s.data() + s.size()) return false;
    if constexpr (std::is_floating_point_v<T>) return std::isfinite(out);
    return true;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

TrainingLog parse_training_log(std::string_view text) {
    TrainingLog log;
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    auto fail = [](int line, const std::string& what) -> void { throw Error(ErrorKind::InvalidValue, what, SourceLoc{line, 1}); };
    auto strip = [](std::string_view l) {
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        return l;
    };
    if (lines.empty()) fail(1, "empty training log");
    if (strip(lines[0]) != kTrainingLogMagic) fail(1, "missing '" + std::string(kTrainingLogMagic) + "' header");
    std::size_t i = 1;
    bool have_meta = false;
    for (; i < lines.size() && strip(lines[i]).starts_with("#"); ++i) {
        auto l = strip(lines[i]).substr(1);
        for (auto tok : split(l, ' ')) {
            if (tok.empty()) continue;
            auto eq = tok.find('=');
            if (eq == std::string_view::npos) fail(static_cast<int>(i + 1), "metadata must be key=value");
            auto key = tok.substr(0, eq);
            std::string value(tok.substr(eq + 1));
            if (key == "algo") log.algo = value, have_meta = true;
            if (key == "game") log.game = value;
            if (key == "config_hash") log.config_hash = value;
        }
    }
    if (!have_meta || log.game.empty()) fail(static_cast<int>(i), "metadata line needs algo= and game=");
    if (i >= lines.size()) fail(static_cast<int>(i + 1), "missing column header");
    auto header = strip(lines[i]);
    bool with_worker = false;
    if (header == "frames,episode_return,episode_length,wall_time,worker") {
        with_worker = true;
    } else if (header != "frames,episode_return,episode_length,wall_time") {
        fail(static_cast<int>(i + 1), "unexpected column header");
    }
    for (++i; i < lines.size(); ++i) {
        int ln = static_cast<int>(i + 1);
        auto l = strip(lines[i]);
        if (l.empty()) continue;
        auto f = split(l, ',');
        if (f.size() != (with_worker ? 5u : 4u)) fail(ln, "expected " + std::to_string(with_worker ? 5 : 4) + " fields");
        TrainingRow r;
        if (!parse_num(f[0], r.frames) || r.frames < 0) fail(ln, "bad frames value");
        if (!parse_num(f[1], r.episode_return)) fail(ln, "bad episode_return value");
        if (!parse_num(f[2], r.episode_length) || r.episode_length < 0) fail(ln, "bad episode_length value");
        if (!parse_num(f[3], r.wall_time) || r.wall_time < 0) fail(ln, "bad wall_time value");
        if (with_worker) {
            int w = 0;
            if (!parse_num(f[4], w) || w < 0) fail(ln, "bad worker value");
            r.worker = w;
        }
        if (!log.rows.empty() && r.frames < log.rows.back().frames) fail(ln, "frame counts must not decrease");
        log.rows.push_back(r);
    }
    if (log.rows.empty()) fail(static_cast<int>(lines.size()), "training log has no episodes");
    return log;
}

std::string format_training_log(const TrainingLog& log) {
    std::ostringstream out;
    bool with_worker = !log.rows.empty() && log.rows.front().worker.has_value();
    out << kTrainingLogMagic << '\n';
    out << "# algo=" << log.algo << " game=" << log.game << " config_hash=" << log.config_hash << '\n';
    out << "frames,episode_return,episode_length,wall_time" << (with_worker ? ",worker" : "") << '\n';
    for (const auto& r : log.rows) {
        out << r.frames << ',' << num(r.episode_return) << ',' << r.episode_length << ',' << num(r.wall_time);
        if (with_worker) out << ',' << r.worker.value_or(0);
        out << '\n';
    }
    return out.str();
}

std::vector<CurvePoint> smooth(const std::vector<TrainingRow>& rows, int window) {
    if (window < 1) throw Error(ErrorKind::InvalidValue, "smoothing window must be >= 1");
    std::vector<CurvePoint> out;
    out.reserve(rows.size());
    double sum = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        sum += rows[i].episode_return;
        if (i >= static_cast<std::size_t>(window)) sum -= rows[i - static_cast<std::size_t>(window)].episode_return;
        auto n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
        out.push_back({rows[i].frames, sum / static_cast<double>(n)});
    }
    return out;
}

std::string render_svg(const std::string& title, const std::vector<CurveSeries>& series) {
    constexpr double W = 640, H = 400, L = 60, R = 130, T = 30, B = 40;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool any = false;
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            double x = static_cast<double>(p.frames);
            if (!any) x0 = x1 = x, y0 = y1 = p.value, any = true;
            x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, p.value), y1 = std::max(y1, p.value);
        }
    }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 -= 1, y1 += 1;
    auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << L << "\" y=\"" << H - B + 15 << "\" font-size=\"10\">" << num(x0) << "</text>\n";
    o << "<text x=\"" << W - R << "\" y=\"" << H - B + 15 << "\" font-size=\"10\" text-anchor=\"end\">" << num(x1) << "</text>\n";
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 8 << "\" font-size=\"11\" text-anchor=\"middle\">frames</text>\n";
    o << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" font-size=\"10\" text-anchor=\"end\">" << num(y0) << "</text>\n";
    o << "<text x=\"" << L - 4 << "\" y=\"" << T + 8 << "\" font-size=\"10\" text-anchor=\"end\">" << num(y1) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* c = colors[k % std::size(colors)];
        o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[k].points.size(); ++i) {
            const auto& p = series[k].points[i];
            o << (i ? " " : "") << num(sx(static_cast<double>(p.frames))) << ',' << num(sy(p.value));
        }
        o << "\"/>\n";
        double ly = T + 15 + 16 * static_cast<double>(k);
        o << "<text x=\"" << W - R + 10 << "\" y=\"" << ly << "\" font-size=\"11\" fill=\"" << c << "\">" << xml_escape(series[k].label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::vector<std::filesystem::path> emit_curves(const std::vector<std::filesystem::path>& logs, const std::filesystem::path& out_dir,
                                               int window) {
    if (logs.empty()) throw Error(ErrorKind::InvalidValue, "no training logs given");
    std::map<std::string, std::vector<CurveSeries>> by_game;
    for (const auto& path : logs) {
        TrainingLog log;
        try {
            log = parse_training_log(read_text_file(path));
        } catch (const Error& e) {
            throw Error(e.kind(), path.string() + ": " + e.detail(), e.loc());
        }
        by_game[log.game].push_back({log.algo, smooth(log.rows, window)});
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    for (const auto& [game, series] : by_game) {
        auto svg = out_dir / (game + ".svg");
        auto csv = out_dir / (game + ".csv");
        std::ofstream s(svg);
        s << render_svg(game + " (" + std::to_string(window) + "-episode mean)", series);
        std::ofstream c(csv);
        c << "algo,frames,smoothed_return\n";
        for (const auto& ser : series) {
            for (const auto& p : ser.points) c << ser.label << ',' << p.frames << ',' << num(p.value) << '\n';
        }
        if (!s || !c) throw Error(ErrorKind::Io, "cannot write curves into " + out_dir.string());
        written.push_back(svg);
        written.push_back(csv);
    }
    return written;
}

}  // namespace gvg
