#include <cstdio>
#include "fracsing/params.hpp"
int main() { std::printf("%.6f\n", fracsing::fundamental_constant(2, 0.5)); }
