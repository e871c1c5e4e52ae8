#include <cstdio>

int main() {
    std::puts("treecut: cli not wired yet");
    return 0;
}
