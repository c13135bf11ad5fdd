#include <cstdio>
int main() { std::puts("descentff placeholder"); return 0; }
