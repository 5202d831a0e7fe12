from lackwalk import CoinKind, SearchInstance


def grid(Ns, ls, ks, coins=(CoinKind.FLIP, CoinKind.SKW)):
    return [SearchInstance(N, l, k, CoinKind(c)) for N in Ns for l in ls for k in ks for c in coins if k < N]
