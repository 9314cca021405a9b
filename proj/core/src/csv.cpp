#include "riskfrac/csv.hpp"

#include "riskfrac/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace riskfrac {

std::string format_number(double value, int significant) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";  // also folds -0
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general,
                                   significant);
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::span<const std::string> header, int significant)
    : out_(out), columns_(header.size()), significant_(significant) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header, int significant)
    : out_(out), columns_(header.size()), significant_(significant) {
    std::size_t i = 0;
    for (auto h : header) out_ << (i++ ? "," : "") << h;
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != columns_) throw domain_error("CSV row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i], significant_);
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::cells(std::span<const std::string> values) {
    if (values.size() != columns_) throw domain_error("CSV row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << values[i];
    out_ << '\n';
}

void write_equity_csv(std::ostream& out, const EquityPath& path, int significant) {
    CsvWriter w(out, {"t", "capital", "log_equity", "dd"}, significant);
    for (std::size_t t = 0; t < path.log_equity.size(); ++t)
        w.cells(std::array<std::string, 4>{std::to_string(t), w.num(path.capital(t)), w.num(path.log_equity[t]),
                                           w.num(path.drawdown[t])});
}

void write_histogram_csv(std::ostream& out, const DrawdownHistogram& hist, int significant) {
    CsvWriter w(out, {"bin", "frequency"}, significant);
    for (std::size_t k = 0; k < DrawdownHistogram::bin_count; ++k)
        w.cells(std::array<std::string, 2>{std::to_string(k), w.num(hist.frequency(k))});
}

void write_runs_csv(std::ostream& out, std::span<const EquityPath> paths, int significant) {
    CsvWriter w(out, {"run", "final_capital", "growth_per_step", "max_drawdown"}, significant);
    for (std::size_t r = 0; r < paths.size(); ++r) {
        const auto& p = paths[r];
        const double growth = (p.log_equity.back() - p.log_equity.front()) / static_cast<double>(p.steps());
        w.cells(std::array<std::string, 4>{std::to_string(r), w.num(p.capital(p.steps())), w.num(growth),
                                           w.num(p.max_drawdown())});
    }
}

} // namespace riskfrac
