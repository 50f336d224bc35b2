#ifndef QMDOS_DETAIL_PARALLEL_HPP
#define QMDOS_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qmdos::detail {

inline unsigned worker_count(std::size_t tasks)
{
   const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
   return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(tasks, 1)));
}

/// Calls body(i) for i in [0, count) on a small thread pool. Tasks are
/// handed out dynamically; results must be written to per-index slots.
/// The first exception thrown by any task is rethrown on the caller.
template <class Body>
void parallel_for(std::size_t count, Body&& body)
{
   const unsigned workers = worker_count(count);
   if (workers <= 1) {
      for (std::size_t i = 0; i < count; ++i)
         body(i);
      return;
   }
   std::atomic<std::size_t> next{0};
   std::exception_ptr error;
   std::mutex error_mutex;
   {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
         pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
               try {
                  body(i);
               } catch (...) {
                  std::lock_guard lock(error_mutex);
                  if (!error)
                     error = std::current_exception();
                  next = count;
               }
            }
         });
      }
   }
   if (error)
      std::rethrow_exception(error);
}

} // namespace qmdos::detail

#endif // QMDOS_DETAIL_PARALLEL_HPP
