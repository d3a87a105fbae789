#pragma once

namespace tscp::detail {

// Relative slack absorbing rounding in (1 - alpha)(m + 1); 0.9 * 10 lands on rank 9.
inline constexpr double kRankSlack = 1e-9;

}  // namespace tscp::detail
