#include "riskfrac/csv.hpp"
#include "riskfrac/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace riskfrac;

TEST(FormatNumber, SignificantDigits) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(0.25), "0.25");
    EXPECT_EQ(format_number(2.0 / 11.0), "0.181818");
    EXPECT_EQ(format_number(1.0 / 3.0, 4), "0.3333");
    EXPECT_EQ(format_number(1234567.0), "1.23457e+06");
    EXPECT_EQ(format_number(-12.5), "-12.5");
    EXPECT_EQ(format_number(100.0), "100");
    EXPECT_EQ(format_number(1e-7), "1e-07");
    EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(CsvWriter, WritesHeaderAndRows) {
    std::ostringstream out;
    {
        CsvWriter w(out, {"f", "value"});
        w.row({0.1, 1.0 / 3.0});
        w.row({0.2, -2.0});
        const std::vector<std::string> cells = {"3", "x"};
        w.cells(cells);
    }
    EXPECT_EQ(out.str(), "f,value\n0.1,0.333333\n0.2,-2\n3,x\n");
}

TEST(CsvWriter, RejectsWrongWidth) {
    std::ostringstream out;
    CsvWriter w(out, {"a", "b"}, 3);
    EXPECT_THROW(w.row({1.0}), riskfrac::domain_error);
    EXPECT_EQ(w.num(3.14159), "3.14");
}
