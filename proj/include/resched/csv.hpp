#ifndef RESCHED_CSV_HPP
#define RESCHED_CSV_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "resched/errors.hpp"
#include "resched/oracle.hpp"
#include "resched/policy.hpp"
#include "resched/simulate.hpp"
#include "resched/solver.hpp"

namespace resched {

namespace csv_detail {

inline std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file: " + path);
    return out;
}

} // namespace csv_detail

/// thresholds.csv: one row per (t, e).
inline void write_thresholds_csv(const std::string& path,
                                 const ThresholdPolicy& p) {
    auto out = csv_detail::open(path);
    out << "t,e,threshold\n";
    for (int t = 1; t <= p.horizon; ++t)
        for (int e = 0; e <= p.battery_cap; ++e)
            out << t << ',' << e << ',' << csv_detail::num(p.threshold(t, e))
                << '\n';
}

/// values.csv: one row per (t, d-or-r, e) with cost-to-go and decision.
inline void write_values_csv(const std::string& path, const ValueTable& vt) {
    auto out = csv_detail::open(path);
    out << "t,d_or_r,e,J,U\n";
    for (int t = 1; t <= vt.horizon; ++t)
        for (std::size_t i = 0; i < vt.grid_size; ++i)
            for (int e = 0; e <= vt.battery_cap; ++e)
                out << t << ',' << csv_detail::num(vt.d_value(i)) << ',' << e
                    << ',' << csv_detail::num(vt.j_at(t, i, e)) << ','
                    << static_cast<int>(vt.u_at(t, i, e)) << '\n';
}

inline void write_trace_csv(const std::string& path, const Trace& trace) {
    auto out = csv_detail::open(path);
    out << "t,x,e,u,y,xhat,stage_cost\n";
    for (const TraceStep& s : trace.steps)
        out << s.t << ',' << csv_detail::num(s.x) << ',' << s.e << ',' << s.u
            << ',' << (s.received ? csv_detail::num(s.x) : "eps") << ','
            << csv_detail::num(s.xhat) << ',' << csv_detail::num(s.stage_cost)
            << '\n';
}

inline void write_trace_csv(const std::string& path, const GaussianTrace& trace) {
    auto out = csv_detail::open(path);
    out << "t,e,u,err_norm,stage_cost\n";
    for (const GaussianTraceStep& s : trace.steps)
        out << s.t << ',' << s.e << ',' << s.u << ','
            << csv_detail::num(s.err_norm) << ',' << csv_detail::num(s.stage_cost)
            << '\n';
}

inline void write_summary_csv(const std::string& path, int seed_count,
                              int rollouts, double mean_cost, double std_err,
                              double predicted) {
    auto out = csv_detail::open(path);
    out << "seed_count,rollouts,mean_cost,std_err,solver_predicted_cost\n";
    out << seed_count << ',' << rollouts << ',' << csv_detail::num(mean_cost)
        << ',' << csv_detail::num(std_err) << ',' << csv_detail::num(predicted)
        << '\n';
}

inline void write_oracle_report_csv(const std::string& path,
                                    const OracleReport& r) {
    auto out = csv_detail::open(path);
    out << "best_cost,best_strategy_id,solver_cost,gap,strategy_count,"
           "threshold_witness\n";
    out << csv_detail::num(r.best_cost) << ',' << r.best_strategy_id << ','
        << csv_detail::num(r.solver_cost) << ',' << csv_detail::num(r.gap) << ','
        << csv_detail::num(r.strategy_count) << ','
        << (r.threshold_witness ? 1 : 0) << '\n';
}

} // namespace resched

#endif
