#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cowi/arm_set.hpp"

using cowi::ArmSet;

TEST(ArmSet, BasicMembership) {
    ArmSet s(10, {1, 3, 9});
    EXPECT_TRUE(s.contains(1));
    EXPECT_FALSE(s.contains(2));
    EXPECT_EQ(s.size(), 3u);
    s.erase(3);
    EXPECT_EQ(s.to_vector(), (std::vector<int>{1, 9}));
    EXPECT_FALSE(s.empty());
    EXPECT_TRUE(ArmSet(10).empty());
}

// Set algebra agrees with std::set on random sets spanning several words.
TEST(ArmSet, AlgebraMatchesStdSet) {
    std::mt19937 gen(4);
    const int universe = 150;
    for (int round = 0; round < 200; ++round) {
        ArmSet a(universe), b(universe);
        std::set<int> sa, sb;
        for (int k = 0; k < universe; ++k) {
            if (gen() % 3 == 0) a.insert(k), sa.insert(k);
            if (gen() % 4 == 0) b.insert(k), sb.insert(k);
        }
        std::set<int> u = sa, in, diff;
        u.insert(sb.begin(), sb.end());
        for (int x : sa) (sb.count(x) ? in : diff).insert(x);

        EXPECT_EQ((a | b).to_vector(), std::vector<int>(u.begin(), u.end()));
        EXPECT_EQ((a & b).to_vector(), std::vector<int>(in.begin(), in.end()));
        EXPECT_EQ((a - b).to_vector(), std::vector<int>(diff.begin(), diff.end()));
        EXPECT_EQ((a | b).size(), u.size());

        std::vector<int> visited;
        a.for_each([&](int x) { visited.push_back(x); });
        EXPECT_EQ(visited, std::vector<int>(sa.begin(), sa.end()));
    }
}
