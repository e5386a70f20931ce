// Basic account with balance tracking.
class Account {
    double balance;
    String owner;
    Ledger ledger;

    Account(String name) {
        this.owner = name;
        balance = 0;
    }

    void deposit(double amount) {
        balance = balance + amount;
        ledger.record(amount);
    }

    void withdraw(double amount) {
        if (amount > balance) {
            return;
        }
        balance = balance - amount;
        ledger.record(amount);
    }

    double getBalance() {
        return balance;
    }

    String describe() {
        return "owner.name() " + owner;
    }
}
