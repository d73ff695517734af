#include <gtest/gtest.h>

#include <sstream>

#include "pilotc/csv.hpp"

using namespace pilotc;

TEST(Csv, ReadsTwoAndThreeDimensions)
{
    std::istringstream in2("t,x,y\n0,1.5,2\n1, -3e2 ,4\r\n\n2.5,0,0\n");
    const auto a = read_csv(in2);
    EXPECT_EQ(a.dim, 2u);
    ASSERT_EQ(a.size(), 3u);
    EXPECT_DOUBLE_EQ(a.point(1)[0], -300.0);
    EXPECT_DOUBLE_EQ(a.times[2], 2.5);

    std::istringstream in3("t,x,y,z\n0,1,2,3\n");
    const auto b = read_csv(in3);
    EXPECT_EQ(b.dim, 3u);
    EXPECT_DOUBLE_EQ(b.point(0)[2], 3.0);
}

TEST(Csv, ReportsLineNumbers)
{
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            read_csv(in);
        } catch (const CsvError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("t,x,y\n0,1,2\n1,abc,3\n"), 3u);
    EXPECT_EQ(line_of("t,x,y\n0,1,2\n1,2\n"), 3u);
    EXPECT_EQ(line_of("time,x,y\n"), 1u);
    EXPECT_EQ(line_of(""), 1u);
    EXPECT_EQ(line_of("t,x,y\n0,1,2\n0,1,2\n"), 3u);
    EXPECT_EQ(line_of("t,x,y\n5,1,2\n4,1,2\n"), 3u);
    EXPECT_EQ(line_of("t,x,y\n5,nan,2\n"), 2u);
}

TEST(Csv, DedupDropsRepeatedTimestamps)
{
    std::istringstream in("t,x,y\n0,1,2\n0,9,9\n1,3,4\n");
    const auto r = read_csv(in, CsvOptions{true});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_DOUBLE_EQ(r.point(0)[0], 1.0);
}

TEST(Csv, WriteThenReadRoundTrips)
{
    TrajectoryRecord r(3);
    const double p[] = {0.1, -2.25, 1e7 + 0.123456789};
    r.push_back(1.0 / 3.0, p);
    std::ostringstream out;
    write_csv(out, r);
    std::istringstream in(out.str());
    const auto back = read_csv(in);
    EXPECT_EQ(back.times, r.times);
    EXPECT_EQ(back.coords, r.coords);
}
