package app.util;

public class Pair<K, V> {
    K first;
    V second;

    public Pair<V, K> swap() {
        return null;
    }
}
