#pragma once

#include <initializer_list>
#include <vector>

#include "perfenv/profiles.hpp"

namespace fixtures {

inline perfenv::QualityMatrix matrix(std::initializer_list<std::vector<double>> rows,
                                     perfenv::CheckpointSchedule schedule = perfenv::CheckpointSchedule{}) {
  std::vector<perfenv::PerformanceProfile> profiles;
  perfenv::ConfigId id = 0;
  for (const auto& r : rows) profiles.push_back({id++, r});
  return perfenv::QualityMatrix(schedule, std::move(profiles));
}

// Four configs, one seed. c1 wins, c2 stalls and is cut at t=32 in both passes.
inline perfenv::QualityMatrix racing_a() {
  return matrix({
      {1.0, .9, .8, .7, .6, .5, .4, .3, .2, .1, .05},
      {1.0, .9, .8, .7, .6, .5, .4, .3, .2, .1, .04},
      {1.0, .9, .8, .7, .7, .7, .7, .7, .7, .7, .7},
      {1.0, .9, .8, .7, .6, .5, .4, .3, .2, .1, .06},
  });
}

// Five configs, pool of two; c2 is cut in pass 1 and recovered in pass 2.
inline perfenv::QualityMatrix racing_b() {
  return matrix({
      {.9, .5, .4, .35, .3, .3, .3, .3, .3, .3, .3},
      {.9, .5, .4, .3, .25, .2, .2, .2, .2, .2, .2},
      {1.0, .7, .5, .4, .3, .2, .1, .05, .05, .05, .05},
      {1.0, .59, .47, .41, .35, .3, .2, .1, .1, .1, .1},
      {1.0, .7, .55, .5, .45, .3, .2, .15, .15, .15, .15},
  });
}

}  // namespace fixtures
