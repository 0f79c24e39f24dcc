#pragma once

// Published per-annotator means and their printed aggregates.

#include <array>

#include "covidbot/eval.hpp"

namespace covidbot::testing {

using embed::ApproachKind;

inline const std::array<eval::PrintedApproachRow, 4> kPublishedApproachRows = {{
    {ApproachKind::kTfidf, 3.967, 3.800, 3.884},
    {ApproachKind::kBert, 4.167, 4.283, 4.225},
    {ApproachKind::kBiobert, 4.133, 4.067, 4.100},
    {ApproachKind::kUse, 3.683, 4.083, 3.883},
}};

inline constexpr double kPublishedOverallAverage = 4.023;

// Rows whose printed columns follow from their annotator means.
inline const std::array<eval::PrintedQuestionRow, 3> kPublishedConsistentQuestionRows = {{
    {1, 4.200, 3.450, 3.825, 0.750, "A1"},
    {3, 4.550, 4.850, 4.700, 0.300, "A2"},
    {7, 2.650, 2.650, 2.650, 0.000, "NA"},
}};

// Printed difference disagrees with the means (|3.850 - 4.450| = 0.600).
inline const eval::PrintedQuestionRow kPublishedRow8 = {8, 3.850, 4.450, 4.150, 0.000, "A2"};

}  // namespace covidbot::testing
