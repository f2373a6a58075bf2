#include <dpp/bench.hpp>
#include <dpp/data.hpp>
#include <dpp/errors.hpp>

#include <json.hpp>

#include <charconv>
#include <fstream>

namespace dpp {

namespace {

const std::string kSummarySuffix = ":summary";

std::string opt(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

std::string record_row(const PathRecord& r)
{
    return r.rule + ',' + format_double(r.lambda) + ',' + format_double(r.lambda_ratio) + ',' +
           std::to_string(r.n_discarded) + ',' + std::to_string(r.n_true_zero) + ',' +
           opt(r.rejection_ratio) + ',' + format_double(r.screen_seconds) + ',' +
           format_double(r.solver_seconds);
}

nlohmann::json opt_json(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <class T>
T parse_field(const std::string& file, std::size_t row, std::size_t col, const std::string& s)
{
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError(file, row, col, "bad field '" + s + "'");
    }
    return v;
}

} // namespace

std::string summary_csv_row(const RuleSummary& s)
{
    return s.rule + kSummarySuffix + ",," + format_double(s.speedup) + ',' +
           std::to_string(s.total_discarded) + ',' + std::to_string(s.total_true_zero) + ',' +
           opt(s.mean_rejection_ratio) + ',' + format_double(s.screen_seconds) + ',' +
           format_double(s.solver_seconds);
}

void emit_report(const PathResult& r, const std::filesystem::path& path, ReportFormat format)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");

    if (format == ReportFormat::Csv) {
        out << kReportHeader << '\n';
        for (const auto& rec : r.records) out << record_row(rec) << '\n';
        for (const auto& s : r.summaries) out << summary_csv_row(s) << '\n';
    } else {
        for (const auto& rec : r.records) {
            nlohmann::json j = {
                {"type", "record"},
                {"rule", rec.rule},
                {"lambda", rec.lambda},
                {"lambda_over_lambda_max", rec.lambda_ratio},
                {"n_discarded", rec.n_discarded},
                {"n_true_zero", rec.n_true_zero},
                {"rejection_ratio", opt_json(rec.rejection_ratio)},
                {"screen_seconds", rec.screen_seconds},
                {"solver_seconds", rec.solver_seconds},
            };
            out << j.dump() << '\n';
        }
        for (const auto& s : r.summaries) {
            nlohmann::json j = {
                {"type", "summary"},
                {"rule", s.rule},
                {"total_discarded", s.total_discarded},
                {"total_true_zero", s.total_true_zero},
                {"mean_rejection_ratio", opt_json(s.mean_rejection_ratio)},
                {"screen_seconds", s.screen_seconds},
                {"solver_seconds", s.solver_seconds},
                {"speedup", s.speedup},
                {"baseline_seconds", r.baseline_seconds},
            };
            out << j.dump() << '\n';
        }
    }
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

ParsedReport parse_report_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string name = path.string();

    std::string line;
    if (!std::getline(in, line)) throw ParseError(name, 1, 1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kReportHeader) throw ParseError(name, 1, 1, "unexpected header");

    ParsedReport rep;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 8) throw ParseError(name, row, f.size(), "expected 8 fields");

        auto num = [&](std::size_t c) { return parse_field<double>(name, row, c + 1, f[c]); };
        auto cnt = [&](std::size_t c) { return parse_field<Index>(name, row, c + 1, f[c]); };
        auto maybe = [&](std::size_t c) -> std::optional<double> {
            if (f[c].empty()) return std::nullopt;
            return num(c);
        };

        const auto& rule = f[0];
        if (rule.size() > kSummarySuffix.size() && rule.ends_with(kSummarySuffix)) {
            RuleSummary s;
            s.rule = rule.substr(0, rule.size() - kSummarySuffix.size());
            s.speedup = num(2);
            s.total_discarded = cnt(3);
            s.total_true_zero = cnt(4);
            s.mean_rejection_ratio = maybe(5);
            s.screen_seconds = num(6);
            s.solver_seconds = num(7);
            rep.summaries.push_back(std::move(s));
        } else {
            PathRecord r;
            r.rule = rule;
            r.lambda = num(1);
            r.lambda_ratio = num(2);
            r.n_discarded = cnt(3);
            r.n_true_zero = cnt(4);
            r.rejection_ratio = maybe(5);
            r.screen_seconds = num(6);
            r.solver_seconds = num(7);
            rep.records.push_back(std::move(r));
        }
    }
    return rep;
}

} // namespace dpp
