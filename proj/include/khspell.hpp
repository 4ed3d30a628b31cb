#pragma once

#include "khspell/char_lm.hpp"
#include "khspell/checker.hpp"
#include "khspell/engine.hpp"
#include "khspell/evalbench.hpp"
#include "khspell/g2p.hpp"
#include "khspell/lexicon.hpp"
#include "khspell/ner.hpp"
#include "khspell/script.hpp"
#include "khspell/segmenter.hpp"
#include "khspell/version.hpp"
