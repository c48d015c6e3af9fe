#include "gibbs_tree_cli/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/root_solver.hpp"

namespace gibbs_tree::cli {

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw Error("could not format double");
    return std::string(buf, end);
}

SweepRecord make_record(const ModelParams& params, const InvariantSetId& set, const SolverConfig& config) {
    SweepRecord rec;
    rec.theta = params.theta;
    rec.set = set;
    for (const ReducedScalar& s : solve_set(params, set, config)) {
        const MeasureDescriptor d = classify(s, params);
        rec.solutions.push_back({s.x, s.y, s.z, s.t, d.classification, s.residual_full});
    }
    return rec;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << kSweepCsvHeader << '\n';
    for (const SweepRecord& rec : records) {
        const char* kind = rec.set.kind == SetKind::IM ? "im" : "imprime";
        for (std::size_t i = 0; i < rec.solutions.size(); ++i) {
            const SolutionRow& row = rec.solutions[i];
            out << format_double(rec.theta) << ',' << kind << ',' << rec.set.m << ',' << i << ','
                << format_double(row.x) << ',' << format_double(row.y) << ','
                << (row.z ? format_double(*row.z) : "") << ',' << (row.t ? format_double(*row.t) : "") << ','
                << short_name(row.classification) << ',' << format_double(row.residual_full) << '\n';
        }
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DomainError("line " + std::to_string(line_no) + ": '" + s + "' is not a number");
    }
    return v;
}

int parse_int(const std::string& s, std::size_t line_no) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DomainError("line " + std::to_string(line_no) + ": '" + s + "' is not an integer");
    }
    return v;
}

}  // namespace

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("empty sweep CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepCsvHeader) throw DomainError("unexpected sweep CSV header: " + line);

    std::vector<SweepRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 10) throw DomainError("line " + std::to_string(line_no) + ": expected 10 fields");

        InvariantSetId set;
        if (cells[1] == "im") {
            set.kind = SetKind::IM;
        } else if (cells[1] == "imprime") {
            set.kind = SetKind::IM_PRIME;
        } else {
            throw DomainError("line " + std::to_string(line_no) + ": unknown set kind " + cells[1]);
        }
        set.m = parse_int(cells[2], line_no);
        const double theta = parse_double(cells[0], line_no);
        const int index = parse_int(cells[3], line_no);

        SolutionRow row;
        row.x = parse_double(cells[4], line_no);
        row.y = parse_double(cells[5], line_no);
        if (!cells[6].empty()) row.z = parse_double(cells[6], line_no);
        if (!cells[7].empty()) row.t = parse_double(cells[7], line_no);
        if (cells[8] == "TI") {
            row.classification = Classification::TRANSLATION_INVARIANT;
        } else if (cells[8] == "P2") {
            row.classification = Classification::PERIOD_TWO;
        } else {
            throw DomainError("line " + std::to_string(line_no) + ": unknown classification " + cells[8]);
        }
        row.residual_full = parse_double(cells[9], line_no);

        const bool continues = !records.empty() && records.back().theta == theta && records.back().set == set &&
                               static_cast<int>(records.back().solutions.size()) == index;
        if (!continues) {
            if (index != 0) throw DomainError("line " + std::to_string(line_no) + ": sol_index out of sequence");
            records.push_back({theta, set, {}});
        }
        records.back().solutions.push_back(row);
    }
    return records;
}

void write_bifurcation_svg(std::ostream& out, const std::vector<SweepRecord>& records, const std::string& title) {
    constexpr double width = 720, height = 480;
    constexpr double left = 70, right = 20, top = 40, bottom = 55;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double t_min = INFINITY, t_max = -INFINITY, x_min = INFINITY, x_max = -INFINITY;
    for (const auto& rec : records) {
        t_min = std::min(t_min, rec.theta);
        t_max = std::max(t_max, rec.theta);
        for (const auto& row : rec.solutions) {
            x_min = std::min(x_min, row.x);
            x_max = std::max(x_max, row.x);
        }
    }
    if (records.empty()) {
        t_min = 0.0;
        t_max = 1.0;
        x_min = 0.0;
        x_max = 1.0;
    }
    x_min = std::min(x_min, 0.0);
    if (t_max <= t_min) {
        t_min -= 0.01;
        t_max += 0.01;
    }
    if (x_max <= x_min) x_max = x_min + 1.0;
    x_max *= 1.05;

    auto px = [&](double theta) { return left + (theta - t_min) / (t_max - t_min) * plot_w; };
    auto py = [&](double x) { return top + (1.0 - (x - x_min) / (x_max - x_min)) * plot_h; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">"
        << title << "</text>\n";
    out << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\"/>\n</g>\n";

    out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double tv = t_min + (t_max - t_min) * i / ticks;
        const double xv = x_min + (x_max - x_min) * i / ticks;
        char tl[32], xl[32];
        std::snprintf(tl, sizeof tl, "%.3g", tv);
        std::snprintf(xl, sizeof xl, "%.3g", xv);
        out << "<line x1=\"" << px(tv) << "\" y1=\"" << top + plot_h << "\" x2=\"" << px(tv) << "\" y2=\""
            << top + plot_h + 5 << "\" stroke=\"black\"/>"
            << "<text x=\"" << px(tv) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << tl
            << "</text>\n";
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << py(xv) << "\" x2=\"" << left << "\" y2=\"" << py(xv)
            << "\" stroke=\"black\"/>"
            << "<text x=\"" << left - 8 << "\" y=\"" << py(xv) + 4 << "\" text-anchor=\"end\">" << xl
            << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">theta</text>\n";
    out << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">x</text>\n";
    out << "</g>\n";

    out << "<g stroke=\"none\">\n";
    for (const auto& rec : records) {
        for (const auto& row : rec.solutions) {
            const bool ti = row.classification == Classification::TRANSLATION_INVARIANT;
            out << "<circle cx=\"" << px(rec.theta) << "\" cy=\"" << py(row.x) << "\" r=\"2.5\" fill=\""
                << (ti ? "#1f77b4" : "#d62728") << "\"/>\n";
        }
    }
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<circle cx=\"" << left + plot_w - 90 << "\" cy=\"" << top + 12 << "\" r=\"4\" fill=\"#1f77b4\"/>"
        << "<text x=\"" << left + plot_w - 80 << "\" y=\"" << top + 16 << "\">TI</text>\n"
        << "<circle cx=\"" << left + plot_w - 90 << "\" cy=\"" << top + 30 << "\" r=\"4\" fill=\"#d62728\"/>"
        << "<text x=\"" << left + plot_w - 80 << "\" y=\"" << top + 34 << "\">period 2</text>\n"
        << "</g>\n";
    out << "</svg>\n";
}

}  // namespace gibbs_tree::cli
