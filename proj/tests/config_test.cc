// Copyright 2026 The PRoBit Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "probit/config.h"

#include <string>

#include <gtest/gtest.h>

#include "probit/errors.h"
#include "probit/rng_stream.h"

namespace probit {
namespace {

std::string ErrorOf(const std::string& text) {
  try {
    ParseConfigString(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigTest, MinimalConfigUsesDefaults) {
  const ExperimentConfig c = ParseConfigString("[experiment]\nscheme = fedavg\n");
  EXPECT_EQ(c.scheme, Scheme::kFedAvg);
  EXPECT_EQ(c.clients, 50u);
  EXPECT_EQ(c.schedule.rounds, 100);
  EXPECT_EQ(c.schedule.local_epochs, 5);
  EXPECT_EQ(c.schedule.batch_size, 10u);
  EXPECT_DOUBLE_EQ(c.schedule.lr, 0.01);
  EXPECT_DOUBLE_EQ(c.schedule.momentum, 0.5);
  EXPECT_DOUBLE_EQ(c.schedule.lambda, 0.2);
  EXPECT_DOUBLE_EQ(c.quant.b_init, 0.01);
  EXPECT_DOUBLE_EQ(c.privacy.epsilon, 0.1);
  EXPECT_DOUBLE_EQ(c.server.sign_step, 0.01);
}

TEST(ConfigTest, SensitivityDefaultsToLearningRateMultiple) {
  const ExperimentConfig c =
      ParseConfigString("[experiment]\nscheme = probit_plus\n[schedule]\nlr = 0.05\n");
  EXPECT_DOUBLE_EQ(c.privacy.delta1, 0.02 * 0.05);
  const ExperimentConfig d = ParseConfigString(
      "[experiment]\nscheme = probit_plus\n[schedule]\nlr = 0.05\n[privacy]\ndelta1 = 0.3\n");
  EXPECT_DOUBLE_EQ(d.privacy.delta1, 0.3);
}

TEST(ConfigTest, CommentsAndWhitespace) {
  const ExperimentConfig c = ParseConfigString(
      "# leading comment\n\n[experiment]  \n  scheme = rsa   # trailing\n; other style\n"
      "[topology]\nclients=7\n");
  EXPECT_EQ(c.scheme, Scheme::kRsa);
  EXPECT_EQ(c.clients, 7u);
}

TEST(ConfigTest, MissingSchemeNamesTheField) {
  const std::string err = ErrorOf("[topology]\nclients = 10\n");
  EXPECT_NE(err.find("scheme"), std::string::npos) << err;
}

TEST(ConfigTest, RejectsUnknownKeysWithLineNumbers) {
  const std::string err = ErrorOf("[experiment]\nscheme = fedavg\n\n[schedule]\nepochs = 3\n");
  EXPECT_NE(err.find("line 5"), std::string::npos) << err;
  EXPECT_NE(err.find("epochs"), std::string::npos) << err;
  EXPECT_NE(ErrorOf("[experiment]\nscheme = fedavg\n[extra]\n"), "");
  EXPECT_NE(ErrorOf("[experiment]\nscheme = fedavg\nscheme = rsa\n").find("duplicate"),
            std::string::npos);
  EXPECT_NE(ErrorOf("scheme = fedavg\n"), "");
  EXPECT_NE(ErrorOf("[experiment]\nscheme fedavg\n"), "");
}

TEST(ConfigTest, RejectsBadValuesNamingTheField) {
  EXPECT_NE(ErrorOf("[experiment]\nscheme = sgd\n").find("scheme"), std::string::npos);
  EXPECT_NE(ErrorOf("[experiment]\nscheme = fedavg\n[schedule]\nlr = fast\n").find("lr"),
            std::string::npos);
  EXPECT_NE(ErrorOf("[experiment]\nscheme = fedavg\n[topology]\nclients = -3\n").find("clients"),
            std::string::npos);
  EXPECT_NE(ErrorOf("[experiment]\nscheme = fedavg\n[topology]\nbeta = 0.5\n").find("beta"),
            std::string::npos);
  EXPECT_NE(ErrorOf("[experiment]\nscheme = fedavg\n[attack]\nkind = worst_case_bits\n")
                .find("kind"),
            std::string::npos);
  EXPECT_NE(ErrorOf("[experiment]\nscheme = fedavg\n[privacy]\nenabled = maybe\n")
                .find("enabled"),
            std::string::npos);
}

TEST(ConfigTest, DynamicBFollowsAttackInAutoMode) {
  ExperimentConfig c = ParseConfigString("[experiment]\nscheme = probit_plus\n");
  EXPECT_TRUE(c.DynamicBEnabled());
  c.attack.kind = AttackKind::kSignFlip;
  c.attack.beta = 0.1;
  EXPECT_FALSE(c.DynamicBEnabled());
  c.quant.dynamic_b = DynamicBMode::kOn;
  EXPECT_TRUE(c.DynamicBEnabled());
  c.scheme = Scheme::kFedAvg;
  EXPECT_FALSE(c.DynamicBEnabled());
}

TEST(ConfigTest, SerializeParseRoundTrip) {
  const ExperimentConfig c = ParseConfigString(
      "[experiment]\nscheme = signsgd_mv\nseed = 18446744073709551615\nworkers = 3\n"
      "output = out dir/x\n[topology]\nclients = 12\nbeta = 0.25\n"
      "[attack]\nkind = worst_case_bits\nworst_case_mode = flip\nlie_in_loss_vote = true\n"
      "[privacy]\nenabled = true\nepsilon = 0.05\n[schedule]\nlr = 0.0123456789\n"
      "[quant]\ndynamic_b = off\n[learner]\nkind = mlp\nhidden = 9\n");
  const std::string text = SerializeConfig(c);
  const ExperimentConfig back = ParseConfigString(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(SerializeConfig(back), text);
  EXPECT_EQ(back.seed, 18446744073709551615ull);
  EXPECT_EQ(back.output, "out dir/x");
  EXPECT_DOUBLE_EQ(back.schedule.lr, 0.0123456789);
}

TEST(ConfigTest, RandomizedRoundTrip) {
  RngStream rng(99, 0, 0);
  const Scheme schemes[] = {Scheme::kProbitPlus, Scheme::kFedAvg, Scheme::kFedGm,
                            Scheme::kSignSgdMv, Scheme::kRsa};
  for (int rep = 0; rep < 200; ++rep) {
    ExperimentConfig c;
    c.scheme = schemes[rng.UniformInt(5)];
    c.seed = rng.NextU64();
    c.clients = 2 + rng.UniformInt(100);
    c.attack.beta = 0.49 * rng.Uniform();
    c.attack.kind = c.attack.beta > 0.2 ? AttackKind::kGaussian : AttackKind::kNone;
    c.attack.gaussian_variance = 200.0 * rng.Uniform();
    c.privacy.enabled = rng.Bernoulli(0.5);
    c.privacy.epsilon = 0.01 + rng.Uniform();
    c.privacy.delta1 = 1e-4 * rng.Uniform() + 1e-9;
    c.schedule.lr = rng.Uniform() * 0.1 + 1e-6;
    c.schedule.momentum = 0.9 * rng.Uniform();
    c.quant.b_init = 0.001 + rng.Uniform();
    c.data.spread = 5.0 * rng.Uniform();
    c.data.per_class = 100 + rng.UniformInt(100);
    const std::string text = SerializeConfig(c);
    const ExperimentConfig back = ParseConfigString(text);
    ASSERT_EQ(SerializeConfig(back), text);
    ASSERT_EQ(back.privacy.delta1, c.privacy.delta1);
    ASSERT_EQ(back.schedule.lr, c.schedule.lr);
    ASSERT_EQ(back.seed, c.seed);
  }
}

TEST(ConfigTest, SchemeNames) {
  for (Scheme s : {Scheme::kProbitPlus, Scheme::kFedAvg, Scheme::kFedGm, Scheme::kSignSgdMv,
                   Scheme::kRsa}) {
    EXPECT_EQ(ParseScheme(SchemeName(s)), s);
  }
  EXPECT_TRUE(IsBitScheme(Scheme::kSignSgdMv));
  EXPECT_FALSE(IsBitScheme(Scheme::kFedGm));
}

}  // namespace
}  // namespace probit
