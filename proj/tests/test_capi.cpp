#include <cstdio>
#include "sana/sana.h"
int main() { std::printf("capi stub\n"); return 0; }
