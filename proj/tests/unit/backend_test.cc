// Copyright 2026 The Conceptual Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "conceptual/backend.h"

#include <gtest/gtest.h>

#include "conceptual/error.h"
#include "support/test_backend.h"

namespace conceptual {
namespace {

using testing::CountingTransport;
using testing::FixtureBuilder;

const char kSentence[] = "I went to the parent teacher conference with my [MASK].";

TEST(MaskedSentenceTest, RequiresExactlyOneMask) {
  EXPECT_NO_THROW(MaskedSentence("a", kSentence));
  EXPECT_THROW(MaskedSentence("a", "no marker here."), ValidationError);
  EXPECT_THROW(MaskedSentence("a", "[MASK] and [MASK]"), ValidationError);
  EXPECT_THROW(MaskedSentence("a", "   "), ValidationError);
}

TEST(MaskedSentenceTest, FillSubstitutesTheSlot) {
  EXPECT_EQ(MaskedSentence("a", kSentence).Fill("mom"),
            "I went to the parent teacher conference with my mom.");
}

TEST(BinaryAnswerTest, PrefixRule) {
  EXPECT_EQ(ParseBinaryAnswer("Yes, sandals are shoes.").verdict, Verdict::kYes);
  EXPECT_EQ(ParseBinaryAnswer("  NO.").verdict, Verdict::kNo);
  EXPECT_EQ(ParseBinaryAnswer("It depends.").verdict, Verdict::kUnparseable);
  EXPECT_EQ(ParseBinaryAnswer("").verdict, Verdict::kUnparseable);
  // "no" is a prefix of "nothing": the rule is literal.
  EXPECT_EQ(ParseBinaryAnswer("Nothing to say").verdict, Verdict::kNo);
  EXPECT_EQ(ParseBinaryAnswer("It depends.").raw, "It depends.");
}

TEST(BackendTest, CompletionsTruncatedInRecordedOrder) {
  FixtureBuilder f;
  f.Describe(4).Complete(kSentence, {{"mom", 0.3}, {"dad", 0.2}, {"parents", 0.1},
                                     {"wife", 0.05}, {"son", 0.01}});
  auto backend = f.Replay();
  const auto top = backend->TopKCompletions(MaskedSentence("s", kSentence), 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].token, "mom");
  EXPECT_EQ(top[1].token, "dad");
  EXPECT_EQ(top[2].token, "parents");
  EXPECT_LE(backend->TopKCompletions(MaskedSentence("s", kSentence), 1).size(), 1u);
}

TEST(BackendTest, CompletionsSortedWithTokenTieBreak) {
  FixtureBuilder f;
  f.Describe(4).Complete(kSentence, {{"zeta", 0.2}, {"alpha", 0.2}, {"top", 0.5}});
  const auto top = f.Replay()->TopKCompletions(MaskedSentence("s", kSentence), 10, 7);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].token, "top");
  EXPECT_EQ(top[1].token, "alpha");
  EXPECT_EQ(top[2].token, "zeta");
  EXPECT_EQ(top[2].source_index, 7);
}

TEST(BackendTest, RejectsBadKAndBadScores) {
  FixtureBuilder f;
  f.Describe(4, 10).Complete(kSentence, {{"mom", 1.5}});
  auto backend = f.Replay();
  const MaskedSentence s("s", kSentence);
  EXPECT_THROW(backend->TopKCompletions(s, 0), ValidationError);
  EXPECT_THROW(backend->TopKCompletions(s, 11), BackendError);
  EXPECT_THROW(backend->TopKCompletions(s, 5), BackendError);
}

TEST(BackendTest, EmbeddingsAreDeterministicAndDimChecked) {
  FixtureBuilder f;
  f.Describe(3)
      .Embed(kSentence, "mom", {0.1, 0.2, 0.3})
      .Embed(kSentence, "dad", {0.1, 0.2, 0.4})
      .Embed(kSentence, "bad", {0.1, 0.2});
  auto backend = f.Replay();
  const MaskedSentence s("s", kSentence);
  const auto a = backend->ContextualEmbedding(s, "mom");
  const auto b = backend->ContextualEmbedding(s, "mom");
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.dim(), 3);
  EXPECT_NE(a.values, backend->ContextualEmbedding(s, "dad").values);
  EXPECT_THROW(backend->ContextualEmbedding(s, "bad"), BackendError);
  EXPECT_THROW(backend->ContextualEmbedding(s, " "), ValidationError);
}

TEST(BackendTest, AskBinaryParsesRecordedAnswer) {
  FixtureBuilder f;
  f.Ask("Is dishwasher a type of tent?", "No.");
  EXPECT_EQ(f.Replay()->AskBinary("Is dishwasher a type of tent?").verdict, Verdict::kNo);
}

TEST(BackendTest, ParaphraseDropsInputAndDuplicates) {
  const std::string input = "I went to the parent teacher conference with my mom.";
  FixtureBuilder f;
  f.Paraphrase(input, {"My mom accompanied me to the parent teacher conference.", input,
                       "My mom  accompanied me to the parent teacher conference.", ""});
  auto backend = f.Replay();
  const auto out = backend->Paraphrase(input);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], "My mom accompanied me to the parent teacher conference.");
  EXPECT_THROW(backend->Paraphrase(kSentence), ValidationError);
}

TEST(BackendTest, EmptyParaphraseList) {
  FixtureBuilder f;
  f.Paraphrase("Plain sentence.", {});
  EXPECT_TRUE(f.Replay()->Paraphrase("Plain sentence.").empty());
}

TEST(BackendTest, DescribeIsCachedAndKeepsExtras) {
  auto transport = std::make_shared<CountingTransport>(nlohmann::json{
      {"model_name", "m"}, {"embedding_dim", 768}, {"max_k", 100}, {"temperature", 0}});
  Backend backend(transport);
  EXPECT_EQ(backend.Describe().embedding_dim, 768);
  EXPECT_EQ(backend.Describe().extra.at("temperature"), 0);
  EXPECT_EQ(transport->calls(), 1);
}

TEST(BackendTest, MalformedResponsesRaiseBackendError) {
  auto transport = std::make_shared<CountingTransport>(nlohmann::json{{"unexpected", 1}});
  Backend backend(transport);
  EXPECT_THROW(backend.Describe(), BackendError);
  EXPECT_THROW(backend.AskBinary("Is it?"), BackendError);
}

}  // namespace
}  // namespace conceptual
