#include "compnovel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace compnovel {

MannWhitney mann_whitney_less(std::span<const double> first, std::span<const double> second)
{
    MannWhitney out;
    const auto n1 = static_cast<double>(first.size());
    const auto n2 = static_cast<double>(second.size());
    if (first.empty() || second.empty()) {
        return out;
    }
    for (double x : first) {
        for (double y : second) {
            out.u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
        }
    }

    std::vector<double> pooled(first.begin(), first.end());
    pooled.insert(pooled.end(), second.begin(), second.end());
    std::sort(pooled.begin(), pooled.end());
    double tie_term = 0;
    for (std::size_t i = 0; i < pooled.size();) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j] == pooled[i]) {
            ++j;
        }
        const auto t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double total = n1 + n2;
    const double variance = n1 * n2 / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    if (!(variance > 0)) {
        out.z = 0;
        out.p = 0.5;
        return out;
    }
    out.z = (out.u - n1 * n2 / 2.0) / std::sqrt(variance);
    out.p = 0.5 * std::erfc(-out.z / std::sqrt(2.0));
    return out;
}

namespace {

using Samples = std::map<std::pair<int, unsigned>, std::vector<const SweepRecord*>>;

Samples group(const std::vector<SweepRecord>& records)
{
    Samples groups;
    for (const auto& r : records) {
        groups[{static_cast<int>(r.method), r.lines}].push_back(&r);
    }
    return groups;
}

std::vector<double> best_c_sample(const std::vector<const SweepRecord*>& rows)
{
    std::vector<double> v;
    for (const auto* r : rows) {
        if (r->error.empty() && r->best_c) {
            v.push_back(*r->best_c);
        }
    }
    return v;
}

std::string num(std::optional<double> v)
{
    if (!v) {
        return "nan";
    }
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    os << *v;
    return os.str();
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

std::vector<CellSummary> summarize(const std::vector<SweepRecord>& records)
{
    std::vector<CellSummary> out;
    for (const auto& [key, rows] : group(records)) {
        CellSummary s;
        s.method = static_cast<MethodKind>(key.first);
        s.lines = key.second;
        double sum_c = 0, sum_l = 0;
        for (const auto* r : rows) {
            ++s.runs;
            if (!r->error.empty()) {
                ++s.errors;
                continue;
            }
            if (!r->best_c || !r->best_l) {
                continue;
            }
            ++s.correct_runs;
            const double c = *r->best_c;
            const double l = *r->best_l;
            s.min_c = s.min_c ? std::min(*s.min_c, c) : c;
            s.min_l = s.min_l ? std::min(*s.min_l, l) : l;
            sum_c += c;
            sum_l += l;
        }
        if (s.correct_runs > 0) {
            s.mean_c = sum_c / static_cast<double>(s.correct_runs);
            s.mean_l = sum_l / static_cast<double>(s.correct_runs);
        }
        out.push_back(s);
    }
    return out;
}

std::vector<Comparison> compare_methods(const std::vector<SweepRecord>& records, double alpha)
{
    const auto groups = group(records);
    std::set<unsigned> sizes;
    std::set<int> methods;
    for (const auto& [key, rows] : groups) {
        methods.insert(key.first);
        sizes.insert(key.second);
    }
    std::vector<Comparison> out;
    for (auto n : sizes) {
        for (int a : methods) {
            for (int b : methods) {
                if (a == b) {
                    continue;
                }
                auto ia = groups.find({a, n});
                auto ib = groups.find({b, n});
                if (ia == groups.end() || ib == groups.end()) {
                    continue;
                }
                Comparison cmp;
                cmp.lines = n;
                cmp.better = static_cast<MethodKind>(a);
                cmp.worse = static_cast<MethodKind>(b);
                const auto xa = best_c_sample(ia->second);
                const auto xb = best_c_sample(ib->second);
                cmp.test = mann_whitney_less(xa, xb);
                cmp.significant = !xa.empty() && !xb.empty() && cmp.test.p < alpha;
                out.push_back(cmp);
            }
        }
    }
    return out;
}

StatsReport build_report(const std::vector<SweepRecord>& records)
{
    StatsReport report;
    const auto summary = summarize(records);

    std::ostringstream s;
    s << "# schema=1\n"
      << "method,n,runs,correct_runs,errors,min_best_c,mean_best_c,min_best_l,mean_best_l\n";
    for (const auto& c : summary) {
        s << method_name(c.method) << ',' << c.lines << ',' << c.runs << ',' << c.correct_runs << ',' << c.errors << ','
          << num(c.min_c) << ',' << num(c.mean_c) << ',' << num(c.min_l) << ',' << num(c.mean_l) << '\n';
        if (c.errors > 0 || c.correct_runs < c.runs) {
            report.warnings.push_back(std::string(method_name(c.method)) + " n=" + std::to_string(c.lines) + ": " +
                                      std::to_string(c.runs - c.correct_runs) +
                                      " run(s) without a correct network or with errors, excluded from means");
        }
    }
    report.summary_csv = s.str();

    std::ostringstream sig;
    sig << "# schema=1\n"
        << "# one-sided Mann-Whitney U on best_c (normal approximation, tie-corrected); "
           "H1: method_a yields smaller networks than method_b\n"
        << "n,method_a,method_b,u,z,p,significant\n";
    for (const auto& cmp : compare_methods(records)) {
        sig << cmp.lines << ',' << method_name(cmp.better) << ',' << method_name(cmp.worse) << ','
            << sci(cmp.test.u) << ',' << sci(cmp.test.z) << ',' << sci(cmp.test.p) << ','
            << (cmp.significant ? "yes" : "no") << '\n';
    }
    report.significance_csv = sig.str();

    std::set<unsigned> sizes;
    std::vector<MethodKind> methods;
    for (const auto& c : summary) {
        sizes.insert(c.lines);
        if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) {
            methods.push_back(c.method);
        }
    }
    std::sort(methods.begin(), methods.end());
    auto table = [&](auto field) {
        std::ostringstream os;
        os << "n";
        for (auto m : methods) {
            os << ' ' << method_name(m);
        }
        os << '\n';
        for (auto n : sizes) {
            os << n;
            for (auto m : methods) {
                std::optional<double> v;
                for (const auto& c : summary) {
                    if (c.method == m && c.lines == n) {
                        v = field(c);
                    }
                }
                os << ' ' << num(v);
            }
            os << '\n';
        }
        return os.str();
    };
    report.comparators_best = table([](const CellSummary& c) { return c.min_c; });
    report.comparators_mean = table([](const CellSummary& c) { return c.mean_c; });
    report.layers_best = table([](const CellSummary& c) { return c.min_l; });
    report.layers_mean = table([](const CellSummary& c) { return c.mean_l; });

    std::ostringstream gp;
    gp << "# gnuplot -p plot.gp\n"
       << "set terminal pngcairo size 900,600\n"
       << "set xlabel 'lines'\n"
       << "set key top left\n"
       << "set datafile missing 'nan'\n";
    const std::pair<const char*, const char*> plots[] = {
        {"comparators_best", "fewest comparators, best run"},
        {"layers_best", "fewest layers, best run"},
        {"comparators_mean", "mean of best comparators over runs"},
        {"layers_mean", "mean of best layers over runs"},
    };
    for (const auto& [file, title] : plots) {
        gp << "set output '" << file << ".png'\n"
           << "set title '" << title << "'\n"
           << "plot for [i=2:" << methods.size() + 1 << "] '" << file
           << ".dat' using 1:i with linespoints title columnhead(i)\n";
    }
    report.gnuplot_script = gp.str();
    return report;
}

void write_report(const StatsReport& report, const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    auto put = [&](const char* name, const std::string& text) {
        std::ofstream out(out_dir / name, std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + (out_dir / name).string());
        }
        out << text;
    };
    put("summary.csv", report.summary_csv);
    put("significance.csv", report.significance_csv);
    put("comparators_best.dat", report.comparators_best);
    put("comparators_mean.dat", report.comparators_mean);
    put("layers_best.dat", report.layers_best);
    put("layers_mean.dat", report.layers_mean);
    put("plot.gp", report.gnuplot_script);
}

} // namespace compnovel
