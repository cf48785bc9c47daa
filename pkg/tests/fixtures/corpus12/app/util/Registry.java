package app.util;

public class Registry<T> extends Log {
    int count;

    public T find(Ident id) {
        return null;
    }
}
