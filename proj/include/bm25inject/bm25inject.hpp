#pragma once

#include "bm25inject/analysis.hpp"
#include "bm25inject/bm25.hpp"
#include "bm25inject/config.hpp"
#include "bm25inject/ensemble.hpp"
#include "bm25inject/inverted_index.hpp"
#include "bm25inject/io_formats.hpp"
#include "bm25inject/metrics.hpp"
#include "bm25inject/normalizer.hpp"
#include "bm25inject/pipeline.hpp"
#include "bm25inject/query_type.hpp"
#include "bm25inject/significance.hpp"
#include "bm25inject/tokenizer.hpp"
