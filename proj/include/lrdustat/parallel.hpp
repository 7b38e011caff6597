#ifndef LRDUSTAT_PARALLEL_HPP
#define LRDUSTAT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace lrdustat {

/// Upper bound on worker threads used by replication loops (0 = hardware).
void set_max_threads(unsigned threads);
unsigned max_threads();

/// Runs body(i) for i in [0, count) on up to max_threads() workers. Results
/// must be written to slots indexed by i; the first exception thrown by any
/// worker is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lrdustat

#endif  // LRDUSTAT_PARALLEL_HPP
