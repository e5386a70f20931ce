// Printed summary; Document lives outside this codebase.
class Report extends Document {
    double amount;
    boolean sent;

    Report(double amount) {
        this.amount = amount;
    }

    void publish() {
        Printer p = new Printer();
        p.print(amount);
        sent = true;
    }
}
