#pragma once

// SVG frame rendering of traces: robots, multiplicity points, the SEC,
// cell rays and in-flight paths. Output is byte-deterministic.

#include <string>
#include <vector>

#include "gathersim/engine.hpp"

namespace gathersim {

struct RenderOptions {
    int every = 1;      // sample every Nth event
    bool cells = false; // draw cell rays (ASYNC_IC traces)
};

// One SVG document per sampled event; ceil(events/every) frames.
std::vector<std::string> render_frames(const Trace& trace, const RenderOptions& opts);

// Writes frame_000000.svg ... into out_dir; returns the frame count.
int render_trace_to_dir(const Trace& trace, const std::string& out_dir,
                        const RenderOptions& opts);

}  // namespace gathersim
