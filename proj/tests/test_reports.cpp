#include <gtest/gtest.h>

#include "satca/reports.hpp"
#include "test_util.hpp"

namespace satca {
namespace {

using testing::make_scenario;

TEST(CsvRecord, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv_record({"a", "b c", ""}), "a,b c,\r\n");
  EXPECT_EQ(csv_record({"x,y", "say \"hi\"", "two\nlines"}), "\"x,y\",\"say \"\"hi\"\"\",\"two\nlines\"\r\n");
}

TEST(RatesCsv, CarriersByUsersInBitsPerSecond) {
  auto s = make_scenario({{100e6, 0.0}, {1.5, 2e6}}, {1e6, 1e6});
  s.users[1].id = 42;
  EXPECT_EQ(rates_csv(s, *s.rate_matrix_override), "carrier_id,0,42\r\n0,100000000,0\r\n1,1.5,2000000\r\n");
}

TEST(UserReportCsv, Columns) {
  SolveReport r;
  r.user_ids = {7, 8};
  r.demands_bps = {60e6, 40e6};
  r.ca.supply_bps = {50e6, 40e6};
  r.baseline.supply_bps = {30e6, 45e6};
  EXPECT_EQ(user_report_csv(r),
            "user_id,demand_mbps,supply_ca_mbps,supply_baseline_mbps,unmet_mbps,unused_mbps\r\n"
            "7,60.000000,50.000000,30.000000,10.000000,0.000000\r\n"
            "8,40.000000,40.000000,45.000000,0.000000,0.000000\r\n");
}

TEST(SweepQ, RowsFollowRequestOrder) {
  auto s = make_scenario({{100e6, 90e6, 70e6}, {60e6, 100e6, 90e6}}, {80e6, 40e6, 30e6}, {2, 1, 1});
  s.demand_profiles = {{80e6, 40e6, 30e6}, {20e6, 90e6, 60e6}};
  const std::vector<std::optional<int>> qs{2, 0, std::nullopt, 1};
  const auto serial = sweep_q(s, qs, 1);
  const auto parallel = sweep_q(s, qs, 3);
  ASSERT_EQ(serial.size(), 4u);
  for (std::size_t k = 0; k < qs.size(); ++k) {
    EXPECT_EQ(serial[k].q, qs[k]);
    EXPECT_EQ(parallel[k].q, qs[k]);
  }
  EXPECT_EQ(sweep_csv(serial, false), sweep_csv(parallel, false));
  const auto csv = sweep_csv(serial, false);
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")), "q,epochs,status,psi,unmet_mbps,unused_mbps,swaps");
  EXPECT_NE(csv.find("\r\nunconstrained,2,"), std::string::npos);
  EXPECT_NE(sweep_csv(serial, true).find(",wall_time_s\r\n"), std::string::npos);
  EXPECT_THROW(sweep_q(s, {}, 1), std::invalid_argument);
  EXPECT_THROW(sweep_q(s, qs, 0), std::invalid_argument);
}

}  // namespace
}  // namespace satca
