#pragma once

#include <traceforge/error.hpp>
#include <traceforge/eval.hpp>
#include <traceforge/event.hpp>
#include <traceforge/event_lines.hpp>
#include <traceforge/io.hpp>
#include <traceforge/quality.hpp>
#include <traceforge/recommender.hpp>
#include <traceforge/schema.hpp>
#include <traceforge/similarity.hpp>
#include <traceforge/stats/distributions.hpp>
#include <traceforge/stats/stats.hpp>
#include <traceforge/synth/clean.hpp>
#include <traceforge/synth/llm_client.hpp>
#include <traceforge/synth/mix.hpp>
#include <traceforge/synth/mock_client.hpp>
#include <traceforge/synth/prompt.hpp>
#include <traceforge/synth/synthesize.hpp>
#include <traceforge/trace.hpp>
#include <traceforge/xes.hpp>
