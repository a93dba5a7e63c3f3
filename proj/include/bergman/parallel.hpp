#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace bergman {

// Worker count used by the library; 0 means hardware concurrency.
void set_default_jobs(int jobs);
int default_jobs();

// Runs body(i) for i in [0, n) on a fixed static partition. Results must be
// written to per-index slots; the first exception (lowest index) is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int jobs = 0);

}  // namespace bergman
