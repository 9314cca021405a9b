#pragma once

#include "riskfrac/simulator.hpp"

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace riskfrac {

// Locale-independent shortest form with `significant` digits (dot decimal).
std::string format_number(double value, int significant = 6);

// Comma-separated output with a header row; numbers go through
// format_number so files are byte-stable across locales.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::span<const std::string> header, int significant = 6);
    CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header, int significant = 6);

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values);
    // Pre-formatted cells (integers, labels).
    void cells(std::span<const std::string> values);

    std::string num(double value) const { return format_number(value, significant_); }

private:
    std::ostream& out_;
    std::size_t columns_;
    int significant_;
};

// Column layouts shared by the CLI and the plotting scripts:
//   equity:    t,capital,log_equity,dd
//   histogram: bin,frequency  (bin k covers drawdowns in (-(k+1)/100, -k/100])
//   runs:      run,final_capital,growth_per_step,max_drawdown
void write_equity_csv(std::ostream& out, const EquityPath& path, int significant = 6);
void write_histogram_csv(std::ostream& out, const DrawdownHistogram& hist, int significant = 6);
void write_runs_csv(std::ostream& out, std::span<const EquityPath> paths, int significant = 6);

} // namespace riskfrac
