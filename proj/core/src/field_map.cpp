#include "lazy_newton/field_map.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "lazy_newton/number_format.hpp"

namespace lazy_newton {

unsigned resolve_thread_count(std::optional<std::string_view> setting) {
    unsigned requested = 0;
    if (setting && !setting->empty()) {
        const auto* first = setting->data();
        const auto* last = first + setting->size();
        const auto [ptr, ec] = std::from_chars(first, last, requested);
        if (ec != std::errc{} || ptr != last) {
            requested = 0;
        }
    }
    if (requested == 0) {
        requested = std::max(1u, std::thread::hardware_concurrency());
    }
    return requested;
}

FieldMapResult field_map(const SceneConfig& config, const GridSpec& grid, unsigned threads) {
    const std::vector<Vec3> points = grid_points(grid);
    const std::size_t total = points.size() * grid.times.size();
    FieldMapResult result;
    result.rows.resize(total);

    auto work = [&](std::size_t index) {
        FieldRow& row = result.rows[index];
        row.t = grid.times[index / points.size()];
        row.point = points[index % points.size()];
        try {
            const Evaluation e = evaluate_superposed(config.sources, config.ambient, row.point, row.t, config.kernel);
            row.potential = e.potential;
            row.field = e.field;
        } catch (const SingularApproach&) {
            constexpr double nan = std::numeric_limits<double>::quiet_NaN();
            row.potential = nan;
            row.field = {nan, nan, nan};
            row.singular = true;
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads == 0 ? resolve_thread_count({}) : threads,
                                                             static_cast<unsigned>(std::max<std::size_t>(total, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i) {
            work(i);
        }
    } else {
        // Rows depend only on their own index.
        std::atomic<std::size_t> next{0};
        std::mutex failure_mutex;
        std::exception_ptr failure;
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    try {
                        for (std::size_t i = next++; i < total; i = next++) {
                            work(i);
                        }
                    } catch (...) {
                        const std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next = total;
                    }
                });
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }
    result.singular_rows =
        static_cast<std::size_t>(std::count_if(result.rows.begin(), result.rows.end(), [](const FieldRow& r) { return r.singular; }));
    return result;
}

void write_field_csv(std::ostream& out, const FieldMapResult& result) {
    out << kFieldCsvHeader << '\n';
    for (const auto& r : result.rows) {
        out << format_number(r.t) << ',' << format_number(r.point.x) << ',' << format_number(r.point.y) << ','
            << format_number(r.point.z) << ',' << format_number(r.potential) << ',' << format_number(r.field.x) << ','
            << format_number(r.field.y) << ',' << format_number(r.field.z) << '\n';
    }
}

void write_field_json(std::ostream& out, const FieldMapResult& result) {
    // Numbers use the CSV formatting; NaN becomes null.
    auto num = [](double v) { return std::isfinite(v) ? format_number(v) : std::string("null"); };
    out << "{\"schema_version\":1,\"columns\":[\"t\",\"x\",\"y\",\"z\",\"phi\",\"gx\",\"gy\",\"gz\"],"
        << "\"singular_rows\":" << result.singular_rows << ",\"rows\":[";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& r = result.rows[i];
        out << (i == 0 ? "" : ",") << '[' << num(r.t) << ',' << num(r.point.x) << ',' << num(r.point.y) << ','
            << num(r.point.z) << ',' << num(r.potential) << ',' << num(r.field.x) << ',' << num(r.field.y) << ','
            << num(r.field.z) << ']';
    }
    out << "]}\n";
}

}  // namespace lazy_newton
