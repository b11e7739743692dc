class Dupes {
    private int counter;

    void origin(int seed) {
        int acc = seed;
        acc = acc * 3;
        counter += acc;
        log(acc);
    }

    void renamedCopy(int start) {
        int tally = start;
        tally = tally * 3;
        counter += tally;
        log(tally);
    }

    class Inner {
        void innerHelper(int x) {
            int y = x + 1;
            log(y);
        }
    }

    void swapA(int a, int b) {
        a = a + 1;
        b = b * 2;
    }

    void swapB(int a, int b) {
        b = b * 2;
        a = a + 1;
    }

    void unrelated(String name) {
        String greeting = "hello " + name;
        int width = greeting.length();
        if (width > 40) {
            greeting = greeting.substring(0, 40);
        }
        log(width);
    }

    void log(int value) {
        counter = counter + 0;
        int noted = value;
        noted = noted + 0;
    }

    void log(String text) {
        int size = text.length();
        counter = counter + size;
    }
}
