#pragma once

// The reference scenario set. scenarios/corpus.json holds the same text.

#include <string_view>

namespace forcelab {

inline constexpr std::string_view kBuiltinCorpus = R"json(
{
  "scenarios": [
    {
      "id": "bigO-growing-weight",
      "theorem": "4.3",
      "forcing": "t*cos(t)",
      "weight": {"expr": "1+t", "class": "non_decreasing"},
      "alpha": 1,
      "grid": {"t_end": 100, "h": 0.01},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "bounded-oscillation",
      "theorem": "4.4",
      "forcing": "2*t*sin(t^2)",
      "weight": {"expr": "1", "class": "non_decreasing"},
      "alpha": 1,
      "grid": {"t_end": 50, "h": 0.01},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "littleo-decaying-weight",
      "theorem": "4.6",
      "forcing": "(1+t)^-2",
      "weight": {"expr": "1/(1+t)", "class": "subexponential"},
      "alpha": 1,
      "grid": {"t_end": 200, "h": 0.02},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "littleo-slow-decay",
      "theorem": "4.8",
      "forcing": "1/(1+t)",
      "weight": {"expr": "1", "class": "non_decreasing"},
      "alpha": 1,
      "grid": {"t_end": 400, "h": 0.05},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "exact-order-oscillation",
      "theorem": "4.12",
      "forcing": "2*t*sin(t^2)",
      "weight": {"expr": "1", "class": "non_decreasing"},
      "alpha": 1,
      "grid": {"t_end": 50, "h": 0.01},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "exact-order-periodic",
      "theorem": "4.13",
      "forcing": "cos(t)",
      "weight": {"expr": "1", "class": "non_decreasing"},
      "alpha": 1,
      "grid": {"t_end": 100, "h": 0.01},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "system-bigO",
      "theorem": "5.1",
      "forcing": ["t*cos(t)", "1"],
      "weight": {"expr": "1+t", "class": "non_decreasing"},
      "system": {"A": [[-1, 2], [0, -3]], "zeta": [0, 0]},
      "grid": {"t_end": 100, "h": 0.01},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "system-derivative-bound",
      "theorem": "5.7",
      "forcing": ["1", "cos(t)"],
      "weight": {"expr": "1", "class": "non_decreasing"},
      "system": {"A": [[-1, 0], [0, -1]]},
      "grid": {"t_end": 50, "h": 0.01},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "system-derivative-aux-weight",
      "theorem": "5.8",
      "forcing": ["2*t*sin(t^2)"],
      "weight": {"expr": "1", "class": "non_decreasing"},
      "aux_weight": {"expr": "1+t", "class": "non_decreasing"},
      "system": {"A": [[-1]]},
      "grid": {"t_end": 50, "h": 0.01},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "liapunov-jordan-block",
      "theorem": "5.11",
      "forcing": ["sin(t)", "cos(t)"],
      "weight": {"expr": "1", "class": "non_decreasing"},
      "system": {"A": [[1, 1], [0, 1]]},
      "grid": {"t_end": 30, "h": 0.01},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "unstable-dominant-forcing",
      "theorem": "unstable-dominant",
      "forcing": ["exp(2*t)*cos(t)", "0"],
      "weight": {"expr": "exp(2*t)", "class": "exponential_rate", "rate": 2},
      "system": {"A": [[1, 0], [0, 0]]},
      "grid": {"t_end": 20, "h": 0.01},
      "outputs": ["report", "plotdata"]
    },
    {
      "id": "exponential-stability",
      "theorem": "exp-stability",
      "forcing": "exp(-2*t)",
      "weight": {"expr": "1", "class": "non_decreasing"},
      "alpha": 1,
      "grid": {"t_end": 20, "h": 0.01},
      "outputs": ["report", "plotdata"]
    }
  ]
}
)json";

}  // namespace forcelab
