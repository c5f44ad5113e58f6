#pragma once

#include "topiclandscape/config.hpp"
#include "topiclandscape/corpus.hpp"
#include "topiclandscape/diachronic.hpp"
#include "topiclandscape/emotion.hpp"
#include "topiclandscape/error.hpp"
#include "topiclandscape/report.hpp"
#include "topiclandscape/stats.hpp"
#include "topiclandscape/synchronic.hpp"
#include "topiclandscape/topic_model.hpp"
